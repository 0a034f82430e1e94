#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "ifpp/point.hpp"

namespace ifpp {

enum class DensityKind { Triangular1D, Ramp1D, Arcsine1D, Uniform1D, Grid1D, Checkerboard2D, Grid2D };

std::string_view to_string(DensityKind kind) noexcept;
DensityKind density_kind_from_string(std::string_view name);

/// Relative floor applied to grid cells before normalization: every cell is
/// raised to at least kDensityFloor * (largest cell value).
inline constexpr double kDensityFloor = 1e-8;

/// Cell containing x for n uniform cells on [0,1]. Points on an interior cell
/// edge belong to the lower-index cell; x <= 0 maps to cell 0.
std::size_t grid_cell(double x, std::size_t n) noexcept;

/// Piecewise-linear cumulative distribution over n uniform cells of [0,1].
///
/// The table holds n+1 knots, starts at exactly 0 and ends at exactly 1. The
/// density is piecewise constant, so the CDF is linear inside each cell and
/// its inverse is computed exactly on that representation.
class MarginalTable {
 public:
  /// `cumulative` must be non-decreasing with n+1 >= 2 entries, first 0 and
  /// last 1 (within 1e-12; the ends are snapped to exactly 0 and 1).
  MarginalTable(std::size_t axis, std::vector<double> cumulative);

  /// Builds the table from non-negative cell masses (normalized internally).
  static MarginalTable from_masses(std::size_t axis, std::span<const double> masses);

  std::size_t axis() const noexcept { return axis_; }
  std::size_t cells() const noexcept { return cum_.size() - 1; }
  std::span<const double> cumulative() const noexcept { return cum_; }

  double cdf(double x) const noexcept;
  /// Exact inverse of `cdf`; a probability on a knot maps to the cell edge.
  double inverse(double p) const noexcept;
  /// Slope of the CDF in the cell containing x.
  double density(double x) const noexcept;
  /// Probability mass of cell i.
  double mass(std::size_t i) const noexcept { return cum_[i + 1] - cum_[i]; }

 private:
  std::size_t axis_;
  std::vector<double> cum_;
};

/// A target probability density on [0,1]^d, d in {1,2}.
///
/// Analytic 1D kinds carry no data. Grid kinds hold a row-major matrix of
/// cell values: row r covers x2 in [r/rows, (r+1)/rows), column c covers x1
/// in [c/cols, (c+1)/cols). 1D grids have a single row. Stored values are
/// clamped and normalized so the density integrates to 1. Instances are
/// immutable and cheap to copy.
struct CheckerboardParams {
  std::size_t cells_per_axis = 4;
  double low = 0.25;
  double high = 1.75;
};

class DensityModel {
 public:
  using CheckerboardParams = ifpp::CheckerboardParams;

  static DensityModel triangular();
  static DensityModel ramp();
  static DensityModel arcsine();
  static DensityModel uniform();
  /// Uniform density on the unit square (a one-cell checkerboard).
  static DensityModel uniform2d();

  /// Piecewise-constant density on [0,1] with one value per cell.
  static DensityModel grid1d(std::vector<double> values);
  /// Piecewise-constant density on [0,1]^2; `values` is row-major with row 0
  /// at the bottom (smallest x2).
  static DensityModel grid2d(std::size_t rows, std::size_t cols, std::vector<double> values);
  /// Alternating-cell density, high cell at the origin. Low cells of 0 are
  /// clamped to the density floor.
  static DensityModel checkerboard(std::size_t cells_per_axis, double low, double high);

  /// Rebuilds a grid model from values that are already clamped and
  /// normalized (deserialization). Values are stored bit-for-bit.
  static DensityModel from_stored_grid(DensityKind kind, std::size_t rows, std::size_t cols,
                                       std::vector<double> values, CheckerboardParams params = {});

  DensityKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept;
  bool is_grid() const noexcept { return grid_ != nullptr; }

  std::size_t rows() const noexcept;
  std::size_t cols() const noexcept;
  std::span<const double> values() const noexcept;
  double cell_value(std::size_t row, std::size_t col) const noexcept;
  const CheckerboardParams& checkerboard_params() const noexcept { return checker_; }

  /// Interior points of [0,1] where a 1D density is not smooth (cell edges,
  /// the triangular apex). Empty for 2D models.
  std::vector<double> kinks() const;

  /// Cumulative table of a 1D grid; null for other kinds.
  const MarginalTable* grid_table() const noexcept;

 private:
  struct GridData {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::unique_ptr<MarginalTable> table;  // 1D grids only
  };

  DensityModel(DensityKind kind, std::shared_ptr<const GridData> grid, CheckerboardParams checker = {})
      : kind_(kind), grid_(std::move(grid)), checker_(checker) {}

  static std::shared_ptr<const GridData> make_grid(std::size_t rows, std::size_t cols,
                                                   std::vector<double> values, bool normalize);

  DensityKind kind_;
  std::shared_ptr<const GridData> grid_;
  CheckerboardParams checker_;
};

/// Density value at x. Throws DomainError when x is outside [0,1]^d.
double pdf_eval(const DensityModel& model, const Point& x);
double pdf_eval(const DensityModel& model, double x);

/// F(x) for a 1D model. Throws KindError for 2D models.
double cdf_1d(const DensityModel& model, double x);
/// F^{-1}(p) for a 1D model. Throws DomainError for p outside [0,1].
double idf_1d(const DensityModel& model, double p);

/// Inverts a non-decreasing function on [lo, hi] by bisection to absolute
/// tolerance 1e-13 (at most 200 iterations).
double invert_monotone(const std::function<double(double)>& f, double p, double lo = 0.0, double hi = 1.0);

/// Marginal CDF of `axis` (0 = x1, 1 = x2) for a 2D model.
MarginalTable marginal_grid(const DensityModel& model, std::size_t axis);

/// CDF of the other axis conditional on `x_first` along `first_axis`.
MarginalTable conditional_cdf_grid(const DensityModel& model, double x_first, std::size_t first_axis = 0);

/// Writes the grid values as CSV: one line per row (row 0 = smallest x2),
/// values formatted with 17 significant digits. Analytic 1D kinds are
/// sampled at the midpoints of `samples` cells.
void write_density_csv(std::ostream& out, const DensityModel& model, std::size_t samples = 1024);

}  // namespace ifpp
