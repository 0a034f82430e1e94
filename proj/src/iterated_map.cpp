#include "ifpp/iterated_map.hpp"

#include <cmath>
#include <string>

#include "ifpp/errors.hpp"

namespace ifpp {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw ParameterError("dimension mismatch: transform has " + std::to_string(a) + ", uniform map has " + std::to_string(b));
}

// Shared loop for both orbit routes; `advance` returns {x_{k+1}, log|J|}.
template <class Advance>
Orbit run_orbit(const Point& x0, std::size_t n, const OrbitOptions& options, Advance&& advance) {
  if (options.thin == 0) throw ParameterError("thinning factor must be at least 1");
  Orbit result;
  result.start = x0;
  result.length = n;
  result.burn_in = options.burn_in;
  result.thin = options.thin;
  if (options.store) result.points.reserve(n / options.thin);

  Point x = x0;
  for (std::size_t k = 0; k < options.burn_in; ++k) x = advance(x).next;
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    auto s = advance(x);
    sum += s.log_jacobian;
    x = s.next;
    if (options.store && k % options.thin == 0) result.points.push_back(x);
  }
  result.log_jacobian_sum = sum;
  result.last = x;
  return result;
}

}  // namespace

IteratedMap IteratedMap::factorize(const RosenblattTransform& transform, const UniformMap& uniform) {
  require_same_dim(transform.dim(), uniform.dim());
  return IteratedMap(transform, transform, uniform, true);
}

IteratedMap IteratedMap::transport(const RosenblattTransform& source, const RosenblattTransform& target,
                                   const UniformMap& uniform) {
  require_same_dim(source.dim(), uniform.dim());
  require_same_dim(target.dim(), uniform.dim());
  return IteratedMap(source, target, uniform, false);
}

IteratedMap::Step IteratedMap::step(const Point& x) const {
  if (same_transform_ && uniform_.is_identity()) {
    source_.forward(x);  // domain check
    return {x, 0.0};
  }
  const Point z = source_.forward(x);
  const Point w = uniform_.apply(z);
  const Point y = target_.inverse(w);
  const double lj = uniform_.log_jacobian(z) + std::log(source_.jacobian_abs(x)) - std::log(target_.jacobian_abs(y));
  return {y, lj};
}

std::vector<Point> IteratedMap::inverse_images(const Point& y) const {
  if (same_transform_ && uniform_.is_identity()) {
    target_.forward(y);
    return {y};
  }
  std::vector<Point> out;
  for (const auto& z : uniform_.inverse_images(target_.forward(y))) out.push_back(source_.inverse(z));
  return out;
}

PointMap conjugate_uniform(PointMap map, const RosenblattTransform& transform) {
  return [map = std::move(map), transform](const Point& z) { return transform.forward(map(transform.inverse(z))); };
}

Point default_start(std::size_t dim) {
  Point p(dim);
  for (double& v : p) v = 0.3;
  return p;
}

Orbit orbit(const IteratedMap& map, const Point& x0, std::size_t n, const OrbitOptions& options) {
  return run_orbit(x0, n, options, [&map](const Point& x) { return map.step(x); });
}

Orbit orbit_via_uniform(const IteratedMap& map, const Point& x0, std::size_t n, const OrbitOptions& options) {
  const auto& R = map.source();
  const auto& U = map.uniform();
  const auto& target = map.target();
  Point z = R.forward(x0);
  // The x-path is a pure function of the z-path; z carries the state.
  auto advance = [&](const Point& x) {
    const double lj_u = U.log_jacobian(z);
    z = U.apply(z);
    const Point next = target.inverse(z);
    const double lj = lj_u + std::log(R.jacobian_abs(x)) - std::log(target.jacobian_abs(next));
    return IteratedMap::Step{next, map.is_transport() || !U.is_identity() ? lj : 0.0};
  };
  return run_orbit(x0, n, options, advance);
}

}  // namespace ifpp
