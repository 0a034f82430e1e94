#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "ifpp/density.hpp"
#include "ifpp/point.hpp"

namespace ifpp {

/// Forward and inverse Rosenblatt transformation of a density.
///
/// For the coordinate ordering (a1, ..., ad), component k of z = R(x) is
/// the CDF of x_{ak} conditional on the already-visited coordinates, so z is
/// indexed by ordering position, not by axis. In 1D this is the CDF.
/// Grid conditionals are selected by the cell containing the conditioning
/// coordinate (edges belong to the lower cell). Immutable; copies share
/// their tables.
class RosenblattTransform {
 public:
  /// `ordering` is a 0-based axis permutation; empty means natural order.
  static RosenblattTransform build(const DensityModel& model, std::vector<std::size_t> ordering = {});

  const DensityModel& model() const noexcept { return state_->model; }
  std::span<const std::size_t> ordering() const noexcept { return state_->ordering; }
  std::size_t dim() const noexcept { return state_->ordering.size(); }

  Point forward(const Point& x) const;
  Point inverse(const Point& z) const;

  /// |det dR/dx| at x, which equals the density (R is triangular).
  double jacobian_abs(const Point& x) const;

  /// Marginal CDF table of the first ordered axis (grid kinds only).
  const MarginalTable* first_table() const noexcept;
  /// Conditional tables of the second ordered axis, one per cell of the first.
  std::span<const MarginalTable> conditional_tables() const noexcept { return state_->conditionals; }

 private:
  struct State {
    DensityModel model;
    std::vector<std::size_t> ordering;
    std::unique_ptr<MarginalTable> first;
    std::vector<MarginalTable> conditionals;
  };

  explicit RosenblattTransform(std::shared_ptr<const State> state) : state_(std::move(state)) {}

  std::shared_ptr<const State> state_;
};

}  // namespace ifpp
