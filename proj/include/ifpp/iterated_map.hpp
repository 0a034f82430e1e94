#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "ifpp/point.hpp"
#include "ifpp/rosenblatt.hpp"
#include "ifpp/uniform_map.hpp"

namespace ifpp {

/// M = R_B^{-1} o U o R_A. With R_A = R_B (see `factorize`) the target
/// density is invariant under M; with distinct transforms (`transport`) M
/// pushes samples of the source density onto the target density.
class IteratedMap {
 public:
  static IteratedMap factorize(const RosenblattTransform& transform, const UniformMap& uniform);
  static IteratedMap transport(const RosenblattTransform& source, const RosenblattTransform& target,
                               const UniformMap& uniform);

  const RosenblattTransform& source() const noexcept { return source_; }
  const RosenblattTransform& target() const noexcept { return target_; }
  const UniformMap& uniform() const noexcept { return uniform_; }
  std::size_t dim() const noexcept { return uniform_.dim(); }
  bool is_transport() const noexcept { return !same_transform_; }

  struct Step {
    Point next;
    double log_jacobian;
  };

  /// One application of M together with log|J_M(x)|, where
  /// |J_M(x)| = |J_U(R_A x)| * rho_A(x) / rho_B(M x).
  Step step(const Point& x) const;

  Point apply(const Point& x) const { return step(x).next; }
  double log_jacobian(const Point& x) const { return step(x).log_jacobian; }

  /// Preimages R_A^{-1}(U^{-1}(R_B(y))).
  std::vector<Point> inverse_images(const Point& y) const;

 private:
  IteratedMap(RosenblattTransform source, RosenblattTransform target, UniformMap uniform, bool same)
      : source_(std::move(source)), target_(std::move(target)), uniform_(std::move(uniform)), same_transform_(same) {}

  RosenblattTransform source_;
  RosenblattTransform target_;
  UniformMap uniform_;
  bool same_transform_;
};

using PointMap = std::function<Point(const Point&)>;

/// U = R o M o R^{-1}, the uniform map a density-preserving M is conjugate to.
PointMap conjugate_uniform(PointMap map, const RosenblattTransform& transform);

/// Starting point used by the experiments: 0.3 on every axis.
Point default_start(std::size_t dim);

struct OrbitOptions {
  std::size_t burn_in = 0;  // iterations discarded before recording
  std::size_t thin = 1;     // store every `thin`-th iterate
  bool store = true;        // keep points in memory
};

/// Forward iterates x_1, ..., x_n of M from x_0 (x_0 itself is not listed).
struct Orbit {
  Point start;
  std::size_t length = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::vector<Point> points;      // stored iterates
  double log_jacobian_sum = 0.0;  // sum of log|J_M(x_k)| for k = 0..n-1 after burn-in
  Point last;

  /// Iteration index (counted from x_0) of stored point i.
  std::size_t step_of(std::size_t i) const noexcept { return burn_in + (i + 1) * thin; }
};

/// Streams n iterates of M: `visit(k, x_k, log|J_M(x_{k-1})|)` for k = 1..n.
/// Returns x_n.
template <class Visit>
Point for_each_iterate(const IteratedMap& map, Point x, std::size_t n, Visit&& visit) {
  for (std::size_t k = 1; k <= n; ++k) {
    auto s = map.step(x);
    x = s.next;
    visit(k, x, s.log_jacobian);
  }
  return x;
}

Orbit orbit(const IteratedMap& map, const Point& x0, std::size_t n, const OrbitOptions& options = {});

/// Same orbit computed through the commuting diagram: U is iterated on the
/// unit cube from z_0 = R(x_0) and every z_k is pulled back by R^{-1}.
Orbit orbit_via_uniform(const IteratedMap& map, const Point& x0, std::size_t n, const OrbitOptions& options = {});

}  // namespace ifpp
