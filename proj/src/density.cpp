#include "ifpp/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "ifpp/errors.hpp"
#include "ifpp/text.hpp"

namespace ifpp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_in_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " outside [0,1]: " + format_double(x));
}

void require_1d(const DensityModel& model, const char* op) {
  if (model.dim() != 1) throw KindError(std::string(op) + " requires a 1D density, got " + std::string(to_string(model.kind())));
}

void require_2d(const DensityModel& model, const char* op) {
  if (model.dim() != 2) throw KindError(std::string(op) + " requires a 2D density, got " + std::string(to_string(model.kind())));
}

}  // namespace

std::string_view to_string(DensityKind kind) noexcept {
  switch (kind) {
    case DensityKind::Triangular1D: return "triangular";
    case DensityKind::Ramp1D: return "ramp";
    case DensityKind::Arcsine1D: return "arcsine";
    case DensityKind::Uniform1D: return "uniform";
    case DensityKind::Grid1D: return "grid1d";
    case DensityKind::Checkerboard2D: return "checkerboard";
    case DensityKind::Grid2D: return "grid2d";
  }
  return "unknown";
}

DensityKind density_kind_from_string(std::string_view name) {
  for (auto kind : {DensityKind::Triangular1D, DensityKind::Ramp1D, DensityKind::Arcsine1D, DensityKind::Uniform1D,
                    DensityKind::Grid1D, DensityKind::Checkerboard2D, DensityKind::Grid2D}) {
    if (to_string(kind) == name) return kind;
  }
  throw ParameterError("unknown density kind '" + std::string(name) + "'");
}

std::size_t grid_cell(double x, std::size_t n) noexcept {
  if (!(x > 0.0)) return 0;
  const double s = std::ceil(x * static_cast<double>(n)) - 1.0;
  if (s <= 0.0) return 0;
  if (s >= static_cast<double>(n - 1)) return n - 1;
  return static_cast<std::size_t>(s);
}

// ---------------------------------------------------------------------------
// MarginalTable

MarginalTable::MarginalTable(std::size_t axis, std::vector<double> cumulative)
    : axis_(axis), cum_(std::move(cumulative)) {
  if (cum_.size() < 2) throw ParameterError("cumulative table needs at least two knots");
  if (std::abs(cum_.front()) > 1e-12 || std::abs(cum_.back() - 1.0) > 1e-12)
    throw ParameterError("cumulative table must run from 0 to 1");
  for (std::size_t i = 1; i < cum_.size(); ++i) {
    if (!(cum_[i] >= cum_[i - 1])) throw ParameterError("cumulative table is not non-decreasing");
  }
  cum_.front() = 0.0;
  cum_.back() = 1.0;
}

MarginalTable MarginalTable::from_masses(std::size_t axis, std::span<const double> masses) {
  std::vector<double> cum(masses.size() + 1, 0.0);
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] >= 0.0)) throw ParameterError("negative cell mass");
    cum[i + 1] = cum[i] + masses[i];
  }
  const double total = cum.back();
  if (!(total > 0.0)) throw NormalizationError("marginal has zero total mass");
  for (double& c : cum) c /= total;
  cum.back() = 1.0;
  return MarginalTable(axis, std::move(cum));
}

double MarginalTable::cdf(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const std::size_t n = cells();
  const std::size_t k = grid_cell(x, n);
  const double t = std::clamp(x * static_cast<double>(n) - static_cast<double>(k), 0.0, 1.0);
  return cum_[k] + t * (cum_[k + 1] - cum_[k]);
}

double MarginalTable::inverse(double p) const noexcept {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const std::size_t n = cells();
  // First cell whose upper knot reaches p; a p on a knot stays in the lower cell.
  const auto it = std::lower_bound(cum_.begin() + 1, cum_.end(), p);
  const auto k = static_cast<std::size_t>(it - (cum_.begin() + 1));
  const double m = cum_[k + 1] - cum_[k];
  const double t = m > 0.0 ? std::clamp((p - cum_[k]) / m, 0.0, 1.0) : 1.0;
  return (static_cast<double>(k) + t) / static_cast<double>(n);
}

double MarginalTable::density(double x) const noexcept {
  const std::size_t n = cells();
  return mass(grid_cell(x, n)) * static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// DensityModel

std::shared_ptr<const DensityModel::GridData> DensityModel::make_grid(std::size_t rows, std::size_t cols,
                                                                      std::vector<double> values, bool normalize) {
  if (rows == 0 || cols == 0) throw ParameterError("grid density needs at least one cell");
  if (values.size() != rows * cols)
    throw ParameterError("grid has " + std::to_string(values.size()) + " values, expected " + std::to_string(rows * cols));
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw ParameterError("grid density values must be finite and non-negative");
  }
  if (normalize) {
    const double vmax = *std::max_element(values.begin(), values.end());
    if (!(vmax > 0.0)) throw NormalizationError("grid density has zero total mass");
    const double floor = kDensityFloor * vmax;
    double sum = 0.0;
    for (double& v : values) {
      v = std::max(v, floor);
      sum += v;
    }
    const double scale = static_cast<double>(rows * cols) / sum;
    for (double& v : values) v *= scale;
  } else if (std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); })) {
    throw ParameterError("stored grid density must be strictly positive");
  }

  auto data = std::make_shared<GridData>();
  data->rows = rows;
  data->cols = cols;
  data->values = std::move(values);
  if (rows == 1) {
    std::vector<double> masses(cols);
    for (std::size_t c = 0; c < cols; ++c) masses[c] = data->values[c] / static_cast<double>(cols);
    data->table = std::make_unique<MarginalTable>(MarginalTable::from_masses(0, masses));
  }
  return data;
}

DensityModel DensityModel::triangular() { return {DensityKind::Triangular1D, nullptr}; }
DensityModel DensityModel::ramp() { return {DensityKind::Ramp1D, nullptr}; }
DensityModel DensityModel::arcsine() { return {DensityKind::Arcsine1D, nullptr}; }
DensityModel DensityModel::uniform() { return {DensityKind::Uniform1D, nullptr}; }
DensityModel DensityModel::uniform2d() { return checkerboard(1, 1.0, 1.0); }

DensityModel DensityModel::grid1d(std::vector<double> values) {
  const std::size_t n = values.size();
  return {DensityKind::Grid1D, make_grid(1, n, std::move(values), true)};
}

DensityModel DensityModel::grid2d(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return {DensityKind::Grid2D, make_grid(rows, cols, std::move(values), true)};
}

DensityModel DensityModel::checkerboard(std::size_t cells_per_axis, double low, double high) {
  if (cells_per_axis == 0) throw ParameterError("checkerboard needs at least one cell per axis");
  if (!(high > 0.0) || !std::isfinite(high)) throw ParameterError("checkerboard high density must be positive");
  if (!(low >= 0.0) || !std::isfinite(low)) throw ParameterError("checkerboard low density must be non-negative");
  const std::size_t n = cells_per_axis;
  std::vector<double> values(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) values[r * n + c] = (r + c) % 2 == 0 ? high : low;
  }
  return {DensityKind::Checkerboard2D, make_grid(n, n, std::move(values), true), CheckerboardParams{n, low, high}};
}

DensityModel DensityModel::from_stored_grid(DensityKind kind, std::size_t rows, std::size_t cols,
                                            std::vector<double> values, CheckerboardParams params) {
  switch (kind) {
    case DensityKind::Grid1D:
      if (rows != 1) throw ParameterError("1D grid must have exactly one row");
      return {kind, make_grid(1, cols, std::move(values), false)};
    case DensityKind::Grid2D:
    case DensityKind::Checkerboard2D:
      return {kind, make_grid(rows, cols, std::move(values), false), params};
    default:
      throw KindError(std::string(to_string(kind)) + " is not a grid kind");
  }
}

std::size_t DensityModel::dim() const noexcept {
  return (kind_ == DensityKind::Checkerboard2D || kind_ == DensityKind::Grid2D) ? 2 : 1;
}

std::size_t DensityModel::rows() const noexcept { return grid_ ? grid_->rows : 0; }
std::size_t DensityModel::cols() const noexcept { return grid_ ? grid_->cols : 0; }

std::span<const double> DensityModel::values() const noexcept {
  if (!grid_) return {};
  return grid_->values;
}

double DensityModel::cell_value(std::size_t row, std::size_t col) const noexcept {
  return grid_->values[row * grid_->cols + col];
}

const MarginalTable* DensityModel::grid_table() const noexcept { return grid_ ? grid_->table.get() : nullptr; }

std::vector<double> DensityModel::kinks() const {
  switch (kind_) {
    case DensityKind::Triangular1D: return {0.5};
    case DensityKind::Grid1D: {
      std::vector<double> edges;
      for (std::size_t c = 1; c < grid_->cols; ++c) edges.push_back(static_cast<double>(c) / static_cast<double>(grid_->cols));
      return edges;
    }
    default: return {};
  }
}

// ---------------------------------------------------------------------------
// Evaluation

double pdf_eval(const DensityModel& model, double x) {
  require_in_unit(x, "density argument");
  switch (model.kind()) {
    case DensityKind::Triangular1D: return 2.0 - 4.0 * std::abs(x - 0.5);
    case DensityKind::Ramp1D: return 2.0 * x;
    case DensityKind::Arcsine1D: return 1.0 / (kPi * std::sqrt(x * (1.0 - x)));
    case DensityKind::Uniform1D: return 1.0;
    case DensityKind::Grid1D: return model.cell_value(0, grid_cell(x, model.cols()));
    default: throw KindError("scalar density evaluation requires a 1D density");
  }
}

double pdf_eval(const DensityModel& model, const Point& x) {
  if (x.size() != model.dim()) throw DomainError("point dimension does not match the density");
  if (model.dim() == 1) return pdf_eval(model, x[0]);
  require_in_unit(x[0], "density argument");
  require_in_unit(x[1], "density argument");
  return model.cell_value(grid_cell(x[1], model.rows()), grid_cell(x[0], model.cols()));
}

double cdf_1d(const DensityModel& model, double x) {
  require_1d(model, "cdf_1d");
  require_in_unit(x, "CDF argument");
  switch (model.kind()) {
    case DensityKind::Triangular1D: return x <= 0.5 ? 2.0 * x * x : 1.0 - 2.0 * (1.0 - x) * (1.0 - x);
    case DensityKind::Ramp1D: return x * x;
    case DensityKind::Arcsine1D:
      // Evaluate from the nearer end so both tails keep full relative precision.
      return x <= 0.5 ? (2.0 / kPi) * std::asin(std::sqrt(x)) : 1.0 - (2.0 / kPi) * std::asin(std::sqrt(1.0 - x));
    case DensityKind::Uniform1D: return x;
    case DensityKind::Grid1D: return model.grid_table()->cdf(x);
    default: break;
  }
  throw KindError("cdf_1d: unsupported kind");
}

double idf_1d(const DensityModel& model, double p) {
  require_1d(model, "idf_1d");
  require_in_unit(p, "probability");
  switch (model.kind()) {
    case DensityKind::Triangular1D: return p <= 0.5 ? std::sqrt(0.5 * p) : 1.0 - std::sqrt(0.5 * (1.0 - p));
    case DensityKind::Ramp1D: return std::sqrt(p);
    case DensityKind::Arcsine1D: {
      if (p <= 0.5) {
        const double s = std::sin(0.5 * kPi * p);
        return s * s;
      }
      const double s = std::sin(0.5 * kPi * (1.0 - p));
      return 1.0 - s * s;
    }
    case DensityKind::Uniform1D: return p;
    case DensityKind::Grid1D: return model.grid_table()->inverse(p);
    default: break;
  }
  throw KindError("idf_1d: unsupported kind");
}

double invert_monotone(const std::function<double(double)>& f, double p, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MarginalTable marginal_grid(const DensityModel& model, std::size_t axis) {
  require_2d(model, "marginal_grid");
  if (axis > 1) throw ParameterError("axis index must be 0 or 1");
  const std::size_t rows = model.rows();
  const std::size_t cols = model.cols();
  const double area = 1.0 / static_cast<double>(rows * cols);
  std::vector<double> masses(axis == 0 ? cols : rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) masses[axis == 0 ? c : r] += model.cell_value(r, c) * area;
  }
  return MarginalTable::from_masses(axis, masses);
}

MarginalTable conditional_cdf_grid(const DensityModel& model, double x_first, std::size_t first_axis) {
  require_2d(model, "conditional_cdf_grid");
  if (first_axis > 1) throw ParameterError("axis index must be 0 or 1");
  require_in_unit(x_first, "conditioning coordinate");
  const std::size_t rows = model.rows();
  const std::size_t cols = model.cols();
  std::vector<double> masses;
  if (first_axis == 0) {
    const std::size_t c = grid_cell(x_first, cols);
    masses.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) masses[r] = model.cell_value(r, c);
  } else {
    const std::size_t r = grid_cell(x_first, rows);
    masses.resize(cols);
    for (std::size_t c = 0; c < cols; ++c) masses[c] = model.cell_value(r, c);
  }
  return MarginalTable::from_masses(1 - first_axis, masses);
}

void write_density_csv(std::ostream& out, const DensityModel& model, std::size_t samples) {
  if (model.is_grid()) {
    for (std::size_t r = 0; r < model.rows(); ++r) {
      for (std::size_t c = 0; c < model.cols(); ++c) {
        if (c) out << ',';
        out << format_double(model.cell_value(r, c));
      }
      out << '\n';
    }
    return;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    if (i) out << ',';
    out << format_double(pdf_eval(model, (static_cast<double>(i) + 0.5) / static_cast<double>(samples)));
  }
  out << '\n';
}

}  // namespace ifpp
