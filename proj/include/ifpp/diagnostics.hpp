#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ifpp/density.hpp"
#include "ifpp/iterated_map.hpp"
#include "ifpp/point.hpp"

namespace ifpp {

/// Counts of points in a regular grid of bins over [0,1]^d. Bins are
/// half-open except the last one per axis, which also holds x = 1. The flat
/// index is row-major with the last axis slowest, matching grid densities.
class HistogramGrid {
 public:
  explicit HistogramGrid(std::vector<std::size_t> bins);

  void add(const Point& x);
  /// Adds the counts of a histogram with identical binning.
  void merge(const HistogramGrid& other);

  std::size_t dim() const noexcept { return bins_.size(); }
  std::span<const std::size_t> bins() const noexcept { return bins_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  double bin_volume() const noexcept;

  std::size_t flat_index(const Point& x) const noexcept;
  /// Fraction of points per bin.
  std::vector<double> masses() const;
  /// Normalized density per bin (integrates to 1).
  std::vector<double> densities() const;

 private:
  std::vector<std::size_t> bins_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Histogram of the stored points of an orbit.
HistogramGrid histogram(const Orbit& orbit, std::vector<std::size_t> bins);

/// Exact probability of each histogram bin under the model.
std::vector<double> model_bin_masses(const DensityModel& model, std::span<const std::size_t> bins);

/// Half the L1 distance between bin masses.
double tv_distance(const HistogramGrid& hist, const DensityModel& model);
double tv_distance(const HistogramGrid& a, const HistogramGrid& b);

struct LyapunovEstimate {
  enum class Mode { Empirical, Theoretical };

  double value = 0.0;
  Mode mode = Mode::Empirical;
  std::size_t count = 0;  // orbit length or quadrature cells
  bool warning = false;   // theoretical: refinement did not settle

  /// `h=<value> mode=<mode> n=<count>` with six decimals.
  std::string summary() const;
};

/// (1/n) sum_{k<n} log|J_M(x_k)| along the orbit from x0.
LyapunovEstimate lyapunov_empirical(const IteratedMap& map, const Point& x0, std::size_t n);

/// Expectation of log|J_M| under the invariant density of a 1D factorized
/// map, by the midpoint rule over breakpoint-aligned, endpoint-graded cells.
LyapunovEstimate lyapunov_theoretical(const IteratedMap& map, std::size_t quad_cells = 16384);

/// max_y | sum_{x in M^{-1}(y)} rho_A(x) / |M'(x)| - rho_B(y) | for a 1D map.
double fp_residual(const IteratedMap& map, std::span<const Point> ys);

/// Mean of g over the stored orbit points.
double ergodic_average(const Orbit& orbit, const std::function<double(const Point&)>& g);

/// One-sample Kolmogorov-Smirnov statistic against Unif[0,1], per axis.
std::vector<double> ks_uniformity(std::span<const Point> zs);

/// Independent samples of the model drawn without the Rosenblatt tables:
/// cell choice plus uniform offset for grids, rejection for bounded 1D
/// densities, (1 - cos(pi u)) / 2 for the arcsine law.
std::vector<Point> sample_density(const DensityModel& model, std::size_t n, std::uint64_t seed);

/// Radical-inverse (van der Corput) value of `index` in `base`.
double radical_inverse(std::uint64_t index, unsigned base);
/// First n Halton points in [0,1]^dim, starting at index 1.
std::vector<Point> halton_points(std::size_t n, std::size_t dim);

}  // namespace ifpp
