#include "ifpp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "ifpp/errors.hpp"
#include "ifpp/text.hpp"

namespace ifpp {

// ---------------------------------------------------------------------------
// Histograms

HistogramGrid::HistogramGrid(std::vector<std::size_t> bins) : bins_(std::move(bins)) {
  if (bins_.empty() || bins_.size() > kMaxDim) throw ParameterError("histogram needs 1.." + std::to_string(kMaxDim) + " axes");
  std::size_t cells = 1;
  for (auto b : bins_) {
    if (b == 0) throw ParameterError("histogram needs at least one bin per axis");
    cells *= b;
  }
  counts_.assign(cells, 0);
}

std::size_t HistogramGrid::flat_index(const Point& x) const noexcept {
  std::size_t flat = 0;
  for (std::size_t k = bins_.size(); k-- > 0;) {
    const double b = static_cast<double>(bins_[k]);
    const double v = std::floor(std::clamp(x[k], 0.0, 1.0) * b);
    const auto i = std::min(static_cast<std::size_t>(v), bins_[k] - 1);
    flat = flat * bins_[k] + i;
  }
  return flat;
}

void HistogramGrid::add(const Point& x) {
  ++counts_[flat_index(x)];
  ++total_;
}

void HistogramGrid::merge(const HistogramGrid& other) {
  if (other.bins_ != bins_) throw ParameterError("cannot merge histograms with different binning");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

double HistogramGrid::bin_volume() const noexcept {
  double v = 1.0;
  for (auto b : bins_) v /= static_cast<double>(b);
  return v;
}

std::vector<double> HistogramGrid::masses() const {
  std::vector<double> m(counts_.size(), 0.0);
  if (total_ == 0) return m;
  const double inv = 1.0 / static_cast<double>(total_);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<double>(counts_[i]) * inv;
  return m;
}

std::vector<double> HistogramGrid::densities() const {
  auto m = masses();
  const double inv_vol = 1.0 / bin_volume();
  for (double& v : m) v *= inv_vol;
  return m;
}

HistogramGrid histogram(const Orbit& orbit, std::vector<std::size_t> bins) {
  HistogramGrid h(std::move(bins));
  for (const auto& p : orbit.points) {
    if (p.size() != h.dim()) throw ParameterError("histogram dimension does not match the orbit");
    h.add(p);
  }
  return h;
}

namespace {

// Length of [lo, hi] intersected with cell i of n uniform cells.
double overlap(double lo, double hi, std::size_t i, std::size_t n) {
  const double a = static_cast<double>(i) / static_cast<double>(n);
  const double b = static_cast<double>(i + 1) / static_cast<double>(n);
  return std::max(0.0, std::min(hi, b) - std::max(lo, a));
}

std::pair<std::size_t, std::size_t> cell_range(double lo, double hi, std::size_t n) {
  const auto first = static_cast<std::size_t>(std::floor(lo * static_cast<double>(n)));
  const auto last = static_cast<std::size_t>(std::ceil(hi * static_cast<double>(n)));
  return {std::min(first, n - 1), std::min(last, n)};
}

double half_l1(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace

std::vector<double> model_bin_masses(const DensityModel& model, std::span<const std::size_t> bins) {
  if (bins.size() != model.dim()) throw ParameterError("histogram dimension does not match the density");
  if (model.dim() == 1) {
    const std::size_t n = bins[0];
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = cdf_1d(model, static_cast<double>(i + 1) / static_cast<double>(n)) -
             cdf_1d(model, static_cast<double>(i) / static_cast<double>(n));
    }
    return m;
  }
  const std::size_t b1 = bins[0];
  const std::size_t b2 = bins[1];
  const std::size_t cols = model.cols();
  const std::size_t rows = model.rows();
  std::vector<double> m(b1 * b2, 0.0);
  for (std::size_t j = 0; j < b2; ++j) {
    const double y0 = static_cast<double>(j) / static_cast<double>(b2);
    const double y1 = static_cast<double>(j + 1) / static_cast<double>(b2);
    const auto [r0, r1] = cell_range(y0, y1, rows);
    for (std::size_t i = 0; i < b1; ++i) {
      const double x0 = static_cast<double>(i) / static_cast<double>(b1);
      const double x1 = static_cast<double>(i + 1) / static_cast<double>(b1);
      const auto [c0, c1] = cell_range(x0, x1, cols);
      double mass = 0.0;
      for (std::size_t r = r0; r < r1; ++r) {
        const double wy = overlap(y0, y1, r, rows);
        if (wy <= 0.0) continue;
        for (std::size_t c = c0; c < c1; ++c) mass += model.cell_value(r, c) * wy * overlap(x0, x1, c, cols);
      }
      m[j * b1 + i] = mass;
    }
  }
  return m;
}

double tv_distance(const HistogramGrid& hist, const DensityModel& model) {
  const auto expected = model_bin_masses(model, hist.bins());
  const auto observed = hist.masses();
  return half_l1(observed, expected);
}

double tv_distance(const HistogramGrid& a, const HistogramGrid& b) {
  if (!std::equal(a.bins().begin(), a.bins().end(), b.bins().begin(), b.bins().end()))
    throw ParameterError("histograms have different binning");
  const auto ma = a.masses();
  const auto mb = b.masses();
  return half_l1(ma, mb);
}

// ---------------------------------------------------------------------------
// Lyapunov exponents

std::string LyapunovEstimate::summary() const {
  return "h=" + format_fixed6(value) + " mode=" + (mode == Mode::Empirical ? "empirical" : "theoretical") +
         " n=" + std::to_string(count);
}

LyapunovEstimate lyapunov_empirical(const IteratedMap& map, const Point& x0, std::size_t n) {
  if (n == 0) throw ParameterError("orbit length must be at least 1");
  double sum = 0.0;
  for_each_iterate(map, x0, n, [&sum](std::size_t, const Point&, double lj) { sum += lj; });
  return {sum / static_cast<double>(n), LyapunovEstimate::Mode::Empirical, n};
}

namespace {

// Breakpoints in z = R(x) where the integrand of the expectation form has
// kinks, jumps or log singularities.
std::vector<double> quadrature_breaks(const IteratedMap& map) {
  const auto& R = map.source();
  const auto& U = map.uniform();
  std::vector<double> pts{0.0, 1.0};
  const auto add_preimages = [&](double w) {
    for (const auto& z : U.inverse_images(Point{w})) pts.push_back(z[0]);
  };
  for (double b : U.branch_points()) pts.push_back(b);
  add_preimages(0.0);
  for (double kink : R.model().kinks()) {
    const double zk = R.forward(Point{kink})[0];
    pts.push_back(zk);
    add_preimages(zk);
  }
  std::erase_if(pts, [](double p) { return !(p >= 0.0 && p <= 1.0); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Midpoint rule in t on each break interval with z = a + (b - a) s(t),
// s(t) = t - sin(2 pi t) / (2 pi); s' vanishes at both ends, which tames
// the log singularities sitting on breakpoints.
double graded_midpoint(const IteratedMap& map, const std::vector<double>& breaks, std::size_t cells) {
  const auto& R = map.source();
  const auto& U = map.uniform();
  const auto integrand = [&](double z) {
    const Point zp{z};
    const double x = R.inverse(zp)[0];
    const double y = R.inverse(U.apply(zp))[0];
    return U.log_jacobian(zp) + std::log(pdf_eval(R.model(), x)) - std::log(pdf_eval(R.model(), y));
  };
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double len = breaks[i + 1] - a;
    if (len < 1e-14) continue;
    const auto m = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(static_cast<double>(cells) * len)));
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(m);
      const double weight = 1.0 - std::cos(two_pi * t);
      const double z = a + len * (t - std::sin(two_pi * t) / two_pi);
      const double g = integrand(std::clamp(z, 0.0, 1.0));
      if (std::isfinite(g)) sum += g * weight;
    }
    total += sum * len / static_cast<double>(m);
  }
  return total;
}

}  // namespace

LyapunovEstimate lyapunov_theoretical(const IteratedMap& map, std::size_t quad_cells) {
  if (map.dim() != 1) throw CapabilityError("theoretical Lyapunov exponent requires a 1D map");
  if (map.is_transport()) throw CapabilityError("theoretical Lyapunov exponent requires a factorized map");
  if (quad_cells < 64) throw ParameterError("quadrature needs at least 64 cells");
  if (map.uniform().is_identity()) return {0.0, LyapunovEstimate::Mode::Theoretical, quad_cells};

  const auto breaks = quadrature_breaks(map);
  const double fine = graded_midpoint(map, breaks, quad_cells);
  const double coarse = graded_midpoint(map, breaks, quad_cells / 2);
  LyapunovEstimate est{fine, LyapunovEstimate::Mode::Theoretical, quad_cells};
  est.warning = !std::isfinite(fine) || std::abs(fine - coarse) > 1e-3 * std::max(1.0, std::abs(fine));
  return est;
}

// ---------------------------------------------------------------------------
// Invariance and averages

double fp_residual(const IteratedMap& map, std::span<const Point> ys) {
  if (map.dim() != 1) throw CapabilityError("FP residual is implemented for 1D maps");
  const auto& source = map.source().model();
  const auto& target = map.target().model();
  double worst = 0.0;
  for (const auto& y : ys) {
    double sum = 0.0;
    for (const auto& x : map.inverse_images(y)) sum += pdf_eval(source, x) / std::exp(map.log_jacobian(x));
    worst = std::max(worst, std::abs(sum - pdf_eval(target, y)));
  }
  return worst;
}

double ergodic_average(const Orbit& orbit, const std::function<double(const Point&)>& g) {
  if (orbit.points.empty()) throw ParameterError("ergodic average needs at least one stored point");
  double sum = 0.0;
  for (const auto& p : orbit.points) sum += g(p);
  return sum / static_cast<double>(orbit.points.size());
}

std::vector<double> ks_uniformity(std::span<const Point> zs) {
  if (zs.empty()) throw ParameterError("KS statistic needs a nonempty sample");
  const std::size_t d = zs.front().size();
  const double n = static_cast<double>(zs.size());
  std::vector<double> stats(d, 0.0);
  std::vector<double> u(zs.size());
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < zs.size(); ++i) u[i] = zs[i][k];
    std::sort(u.begin(), u.end());
    double D = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double lo = static_cast<double>(i) / n;
      const double hi = static_cast<double>(i + 1) / n;
      D = std::max({D, hi - u[i], u[i] - lo});
    }
    stats[k] = D;
  }
  return stats;
}

std::vector<Point> sample_density(const DensityModel& model, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(n);
  if (model.is_grid()) {
    const auto values = model.values();
    std::discrete_distribution<std::size_t> pick(values.begin(), values.end());
    const double rows = static_cast<double>(model.rows());
    const double cols = static_cast<double>(model.cols());
    while (out.size() < n) {
      const std::size_t cell = pick(rng);
      const double x1 = (static_cast<double>(cell % model.cols()) + unif(rng)) / cols;
      const double x2 = (static_cast<double>(cell / model.cols()) + unif(rng)) / rows;
      out.push_back(model.dim() == 1 ? Point{x1} : Point{x1, x2});
    }
    return out;
  }
  if (model.kind() == DensityKind::Arcsine1D) {
    while (out.size() < n) out.push_back(Point{0.5 * (1.0 - std::cos(std::numbers::pi * unif(rng)))});
    return out;
  }
  constexpr double bound = 2.0;  // sup of the bounded analytic densities
  while (out.size() < n) {
    const double x = unif(rng);
    if (unif(rng) * bound <= pdf_eval(model, x)) out.push_back(Point{x});
  }
  return out;
}

double radical_inverse(std::uint64_t index, unsigned base) {
  const double inv_base = 1.0 / static_cast<double>(base);
  double scale = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

std::vector<Point> halton_points(std::size_t n, std::size_t dim) {
  static constexpr unsigned primes[] = {2, 3, 5, 7};
  if (dim == 0 || dim > kMaxDim) throw ParameterError("Halton dimension out of range");
  std::vector<Point> pts(n, Point(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) pts[i][k] = radical_inverse(i + 1, primes[k]);
  }
  return pts;
}

}  // namespace ifpp
