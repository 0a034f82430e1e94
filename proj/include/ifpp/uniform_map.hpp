#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ifpp/point.hpp"

namespace ifpp {

/// Translation added after chaotic maps so finite-precision orbits do not
/// collapse onto dyadic rationals.
inline constexpr double kDefaultJitter = 1.0 / 3.0 * 1e-9;

enum class JitterPolicy {
  Auto,  // jitter maps that contain a chaotic atom
  On,
  Off,
};

/// A map on [0,1]^d that leaves the uniform distribution invariant.
///
/// Maps are immutable expression trees over a closed catalog of atoms:
///
///   identity[:d]      x
///   translation:c     x + c mod 1, c in [0,1) (also written N/D)
///   sawtooth:l        l*x mod 1
///   triangle:l        1 - 2|sawtooth_l(x) - 1/2|
///   asym:c            x/c on [0,c], (1-x)/(1-c) on [c,1]
///   baker             (2x1 mod 1, (x2 + [x1 > 1/2]) / 2)
///   arnold            ((2x1 + x2) mod 1, (x1 + x2) mod 1)
///   jitter:c[:d]      translation by c on every axis; for d >= 2 the first
///                     axis is additionally sheared by c * x_d
///
/// combined with `product(...)` (one child per block of axes) and
/// `compose(...)` (children applied in the order written). Results of
/// `mod 1` lie in [0,1), so a jump lands on 0; at kinks the left branch is used.
class UniformMap {
 public:
  static UniformMap identity(std::size_t dim = 1);
  static UniformMap translation(double c);
  static UniformMap sawtooth(std::uint64_t periods);
  static UniformMap triangle(std::uint64_t periods);
  static UniformMap asym_triangle(double c);
  static UniformMap baker();
  static UniformMap arnold_cat();
  static UniformMap jitter(double c, std::size_t dim = 1);

  /// Coordinate-wise map; dimensions of the parts add up.
  static UniformMap product(const std::vector<UniformMap>& parts);
  /// Applies `steps` in sequence: steps[0] first. All must share a dimension.
  static UniformMap sequence(const std::vector<UniformMap>& steps);

  std::size_t dim() const noexcept;

  /// The same map followed by a jitter translation of size c.
  UniformMap with_jitter(double c = kDefaultJitter) const;
  /// Removes a trailing jitter added by `with_jitter`.
  UniformMap without_jitter() const;
  bool has_jitter() const noexcept;
  double jitter_amount() const noexcept;

  /// True if any atom has a positive Lyapunov exponent.
  bool is_chaotic() const noexcept;
  /// True if the map is exactly the identity (no jitter, zero shifts).
  bool is_identity() const noexcept;

  Point apply(const Point& z) const;
  /// log |det DU(z)|, piecewise constant over branches.
  double log_jacobian(const Point& z) const;
  /// Every preimage of y. Throws CapabilityError for sawtooth/triangle maps
  /// with more than 2^20 periods.
  std::vector<Point> inverse_images(const Point& y) const;

  /// Sorted interior kinks and jumps of a 1D map.
  std::vector<double> branch_points() const;

  /// Closed-form Lyapunov spectrum, one value per axis. Compositions add
  /// their parts and are only supported for coordinate-wise maps (jitter
  /// steps contribute nothing). Throws CapabilityError otherwise.
  std::vector<double> theoretical_entropy() const;

  /// Canonical text in the spec mini-language.
  std::string to_string() const;

  struct Node;

 private:
  explicit UniformMap(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  std::shared_ptr<const Node> root_;
};

/// Map applying `first` and then `second`.
UniformMap compose(const UniformMap& first, const UniformMap& second);

/// Orbit period of the rational shift N/D: D / gcd(N, D).
std::uint64_t period(std::int64_t numerator, std::int64_t denominator);

/// Parses the mini-language. ParseError::column() gives the offending
/// character offset. Jitter is appended at the top level per `policy`
/// unless the text already ends in an explicit jitter step.
UniformMap parse_uniform_map(std::string_view text, JitterPolicy policy = JitterPolicy::Auto);

}  // namespace ifpp
