#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>

namespace ifpp {

/// Largest state dimension supported by the fixed-capacity point type.
inline constexpr std::size_t kMaxDim = 4;

/// A point in [0,1]^d with inline storage, so orbit loops never allocate.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : dim_(dim) { assert(dim <= kMaxDim); }
  Point(std::initializer_list<double> values) : dim_(values.size()) {
    assert(values.size() <= kMaxDim);
    std::copy(values.begin(), values.end(), v_.begin());
  }
  explicit Point(std::span<const double> values) : dim_(values.size()) {
    assert(values.size() <= kMaxDim);
    std::copy(values.begin(), values.end(), v_.begin());
  }

  std::size_t size() const noexcept { return dim_; }
  double& operator[](std::size_t i) noexcept { return v_[i]; }
  double operator[](std::size_t i) const noexcept { return v_[i]; }

  double* begin() noexcept { return v_.data(); }
  double* end() noexcept { return v_.data() + dim_; }
  const double* begin() const noexcept { return v_.data(); }
  const double* end() const noexcept { return v_.data() + dim_; }

  std::span<double> span() noexcept { return {v_.data(), dim_}; }
  std::span<const double> span() const noexcept { return {v_.data(), dim_}; }

  friend bool operator==(const Point& a, const Point& b) noexcept {
    return a.dim_ == b.dim_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<double, kMaxDim> v_{};
  std::size_t dim_ = 0;
};

/// Sup-norm distance between two points of equal dimension.
inline double max_abs_diff(const Point& a, const Point& b) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
  return m;
}

}  // namespace ifpp
