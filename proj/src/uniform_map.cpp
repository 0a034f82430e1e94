#include "ifpp/uniform_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ifpp/errors.hpp"
#include "ifpp/text.hpp"

namespace ifpp {

enum class Op { Identity, Translation, Sawtooth, Triangle, AsymTriangle, Baker, ArnoldCat, Jitter, Product, Sequence };

struct UniformMap::Node {
  Op op;
  std::size_t dim = 1;
  double c = 0.0;
  std::uint64_t periods = 1;
  std::vector<std::shared_ptr<const Node>> children{};
};

namespace {

using NodePtr = std::shared_ptr<const UniformMap::Node>;
using Node = UniformMap::Node;

constexpr std::uint64_t kMaxEnumerablePeriods = std::uint64_t{1} << 20;

double frac(double v) noexcept {
  const double f = v - std::floor(v);
  return f >= 1.0 ? 0.0 : f;
}

NodePtr make_node(Node node) { return std::make_shared<const Node>(std::move(node)); }

void apply_node(const Node& n, std::span<const double> in, std::span<double> out);

void apply_sequence(const Node& n, std::span<const double> in, std::span<double> out) {
  Point buf(n.dim);
  std::copy(in.begin(), in.end(), buf.begin());
  for (const auto& child : n.children) {
    Point next(n.dim);
    apply_node(*child, buf.span(), next.span());
    buf = next;
  }
  std::copy(buf.begin(), buf.end(), out.begin());
}

void apply_node(const Node& n, std::span<const double> in, std::span<double> out) {
  switch (n.op) {
    case Op::Identity:
      std::copy(in.begin(), in.end(), out.begin());
      return;
    case Op::Translation:
      out[0] = frac(in[0] + n.c);
      return;
    case Op::Sawtooth:
      out[0] = frac(static_cast<double>(n.periods) * in[0]);
      return;
    case Op::Triangle: {
      const double s = frac(static_cast<double>(n.periods) * in[0]);
      out[0] = 1.0 - 2.0 * std::abs(s - 0.5);
      return;
    }
    case Op::AsymTriangle: {
      const double x = in[0];
      out[0] = std::clamp(x <= n.c ? x / n.c : (1.0 - x) / (1.0 - n.c), 0.0, 1.0);
      return;
    }
    case Op::Baker: {
      const double x1 = in[0];
      const double x2 = in[1];
      out[0] = frac(2.0 * x1);
      out[1] = x1 <= 0.5 ? 0.5 * x2 : 0.5 * (x2 + 1.0);
      return;
    }
    case Op::ArnoldCat: {
      const double x1 = in[0];
      const double x2 = in[1];
      out[0] = frac(2.0 * x1 + x2);
      out[1] = frac(x1 + x2);
      return;
    }
    case Op::Jitter: {
      const std::size_t d = n.dim;
      if (d == 1) {
        out[0] = frac(in[0] + n.c);
        return;
      }
      const double shear = n.c * (1.0 + in[d - 1]);
      for (std::size_t k = 1; k < d; ++k) out[k] = frac(in[k] + n.c);
      out[0] = frac(in[0] + shear);
      return;
    }
    case Op::Product: {
      std::size_t offset = 0;
      for (const auto& child : n.children) {
        apply_node(*child, in.subspan(offset, child->dim), out.subspan(offset, child->dim));
        offset += child->dim;
      }
      return;
    }
    case Op::Sequence:
      apply_sequence(n, in, out);
      return;
  }
}

double log_jacobian_node(const Node& n, std::span<const double> in) {
  switch (n.op) {
    case Op::Identity:
    case Op::Translation:
    case Op::Baker:
    case Op::ArnoldCat:
    case Op::Jitter:
      return 0.0;
    case Op::Sawtooth:
      return std::log(static_cast<double>(n.periods));
    case Op::Triangle:
      return std::log(2.0 * static_cast<double>(n.periods));
    case Op::AsymTriangle:
      return in[0] <= n.c ? -std::log(n.c) : -std::log1p(-n.c);
    case Op::Product: {
      double sum = 0.0;
      std::size_t offset = 0;
      for (const auto& child : n.children) {
        sum += log_jacobian_node(*child, in.subspan(offset, child->dim));
        offset += child->dim;
      }
      return sum;
    }
    case Op::Sequence: {
      double sum = 0.0;
      Point buf(in);
      for (const auto& child : n.children) {
        sum += log_jacobian_node(*child, buf.span());
        Point next(n.dim);
        apply_node(*child, buf.span(), next.span());
        buf = next;
      }
      return sum;
    }
  }
  return 0.0;
}

void require_enumerable(const Node& n) {
  if (n.periods > kMaxEnumerablePeriods)
    throw CapabilityError("preimage enumeration limited to 2^20 periods, map has " + std::to_string(n.periods));
}

void dedupe(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<double> preimages_1d(const Node& n, double y) {
  std::vector<double> xs;
  switch (n.op) {
    case Op::Identity:
      xs.push_back(y);
      break;
    case Op::Translation:
    case Op::Jitter:
      xs.push_back(frac(y - n.c));
      break;
    case Op::Sawtooth: {
      require_enumerable(n);
      const double l = static_cast<double>(n.periods);
      if (y < 1.0) {
        for (std::uint64_t k = 0; k < n.periods; ++k) xs.push_back((static_cast<double>(k) + y) / l);
      }
      break;
    }
    case Op::Triangle: {
      require_enumerable(n);
      const double l = static_cast<double>(n.periods);
      for (std::uint64_t k = 0; k < n.periods; ++k) {
        const double base = static_cast<double>(k);
        xs.push_back((base + 0.5 * y) / l);
        xs.push_back((base + 1.0 - 0.5 * y) / l);
      }
      dedupe(xs);
      break;
    }
    case Op::AsymTriangle:
      xs = {n.c * y, 1.0 - (1.0 - n.c) * y};
      dedupe(xs);
      break;
    default:
      throw CapabilityError("not a one-dimensional atom");
  }
  return xs;
}

std::vector<Point> preimages_node(const Node& n, const Point& y) {
  switch (n.op) {
    case Op::Baker: {
      const double y1 = y[0];
      const double y2 = y[1];
      if (y2 < 0.5) return {Point{0.5 * y1, 2.0 * y2}};
      return {Point{0.5 * (y1 + 1.0), std::min(1.0, 2.0 * y2 - 1.0)}};
    }
    case Op::ArnoldCat:
      return {Point{frac(y[0] - y[1]), frac(2.0 * y[1] - y[0])}};
    case Op::Identity:
      return {y};
    case Op::Jitter: {
      if (n.dim == 1) return {Point{frac(y[0] - n.c)}};
      Point x(n.dim);
      for (std::size_t k = 1; k < n.dim; ++k) x[k] = frac(y[k] - n.c);
      x[0] = frac(y[0] - n.c * (1.0 + x[n.dim - 1]));
      return {x};
    }
    case Op::Product: {
      std::vector<Point> acc{Point(std::size_t{0})};
      std::size_t offset = 0;
      for (const auto& child : n.children) {
        const Point part(y.span().subspan(offset, child->dim));
        const auto pre = preimages_node(*child, part);
        std::vector<Point> next;
        next.reserve(acc.size() * pre.size());
        for (const auto& head : acc) {
          for (const auto& tail : pre) {
            Point joined(head.size() + tail.size());
            std::copy(head.begin(), head.end(), joined.begin());
            std::copy(tail.begin(), tail.end(), joined.begin() + head.size());
            next.push_back(joined);
          }
        }
        acc = std::move(next);
        offset += child->dim;
      }
      return acc;
    }
    case Op::Sequence: {
      std::vector<Point> current{y};
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        std::vector<Point> next;
        for (const auto& p : current) {
          auto pre = preimages_node(**it, p);
          next.insert(next.end(), pre.begin(), pre.end());
        }
        current = std::move(next);
      }
      return current;
    }
    default: {
      std::vector<Point> out;
      for (double x : preimages_1d(n, y[0])) out.push_back(Point{x});
      return out;
    }
  }
}

std::vector<double> branch_points_node(const Node& n) {
  std::vector<double> pts;
  switch (n.op) {
    case Op::Identity:
      break;
    case Op::Translation:
    case Op::Jitter:
      if (n.c > 0.0) pts.push_back(1.0 - n.c);
      break;
    case Op::Sawtooth:
      require_enumerable(n);
      for (std::uint64_t k = 1; k < n.periods; ++k) pts.push_back(static_cast<double>(k) / static_cast<double>(n.periods));
      break;
    case Op::Triangle:
      require_enumerable(n);
      for (std::uint64_t k = 1; k < 2 * n.periods; ++k)
        pts.push_back(static_cast<double>(k) / (2.0 * static_cast<double>(n.periods)));
      break;
    case Op::AsymTriangle:
      pts.push_back(n.c);
      break;
    case Op::Sequence: {
      // Walk backwards: breakpoints of the tail are pulled back through each step.
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        std::vector<double> pulled = branch_points_node(**it);
        for (double p : pts) {
          for (const auto& x : preimages_node(**it, Point{p})) pulled.push_back(x[0]);
        }
        pts = std::move(pulled);
      }
      break;
    }
    default:
      throw CapabilityError("branch points are only defined for one-dimensional maps");
  }
  std::erase_if(pts, [](double p) { return !(p > 0.0 && p < 1.0); });
  dedupe(pts);
  return pts;
}

bool separable(const Node& n) {
  switch (n.op) {
    case Op::Baker:
    case Op::ArnoldCat:
      return false;
    case Op::Product:
    case Op::Sequence:
      return std::all_of(n.children.begin(), n.children.end(), [](const auto& c) { return separable(*c); });
    default:
      return true;
  }
}

std::vector<double> entropy_node(const Node& n) {
  switch (n.op) {
    case Op::Identity:
    case Op::Jitter:
      return std::vector<double>(n.dim, 0.0);
    case Op::Translation:
      return {0.0};
    case Op::Sawtooth:
      return {std::log(static_cast<double>(n.periods))};
    case Op::Triangle:
      return {std::log(2.0 * static_cast<double>(n.periods))};
    case Op::AsymTriangle:
      return {-n.c * std::log(n.c) - (1.0 - n.c) * std::log1p(-n.c)};
    case Op::Baker:
      return {std::numbers::ln2, -std::numbers::ln2};
    case Op::ArnoldCat: {
      const double h = std::log((3.0 + std::sqrt(5.0)) / 2.0);
      return {h, -h};
    }
    case Op::Product: {
      std::vector<double> out;
      for (const auto& child : n.children) {
        auto part = entropy_node(*child);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case Op::Sequence: {
      std::vector<const Node*> steps;
      for (const auto& child : n.children) {
        if (child->op != Op::Jitter) steps.push_back(child.get());
      }
      if (steps.size() == 1) return entropy_node(*steps.front());
      std::vector<double> sum(n.dim, 0.0);
      for (const Node* step : steps) {
        if (!separable(*step))
          throw CapabilityError("closed-form exponent of a composition needs coordinate-wise steps");
        const auto part = entropy_node(*step);
        for (std::size_t k = 0; k < n.dim; ++k) sum[k] += part[k];
      }
      return sum;
    }
  }
  throw CapabilityError("no closed-form exponent for this map");
}

std::string node_to_string(const Node& n) {
  switch (n.op) {
    case Op::Identity:
      return n.dim == 1 ? "identity" : "identity:" + std::to_string(n.dim);
    case Op::Translation:
      return "translation:" + format_double(n.c);
    case Op::Sawtooth:
      return "sawtooth:" + std::to_string(n.periods);
    case Op::Triangle:
      return "triangle:" + std::to_string(n.periods);
    case Op::AsymTriangle:
      return "asym:" + format_double(n.c);
    case Op::Baker:
      return "baker";
    case Op::ArnoldCat:
      return "arnold";
    case Op::Jitter:
      return "jitter:" + format_double(n.c) + (n.dim == 1 ? "" : ":" + std::to_string(n.dim));
    case Op::Product:
    case Op::Sequence: {
      std::string s = n.op == Op::Product ? "product(" : "compose(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ", ";
        s += node_to_string(*n.children[i]);
      }
      return s + ")";
    }
  }
  return {};
}

bool chaotic_node(const Node& n) {
  switch (n.op) {
    case Op::Sawtooth: return n.periods > 1;
    case Op::Triangle:
    case Op::AsymTriangle:
    case Op::Baker:
    case Op::ArnoldCat:
      return true;
    case Op::Product:
    case Op::Sequence:
      return std::any_of(n.children.begin(), n.children.end(), [](const auto& c) { return chaotic_node(*c); });
    default:
      return false;
  }
}

bool identity_node(const Node& n) {
  switch (n.op) {
    case Op::Identity: return true;
    case Op::Translation: return n.c == 0.0;
    case Op::Product:
    case Op::Sequence:
      return std::all_of(n.children.begin(), n.children.end(), [](const auto& c) { return identity_node(*c); });
    default:
      return false;
  }
}

void require_shift(double c, const char* what) {
  if (!(c >= 0.0 && c < 1.0)) throw ParameterError(std::string(what) + " shift must lie in [0,1), got " + format_double(c));
}

void require_point(const Point& z, std::size_t dim) {
  if (z.size() != dim)
    throw DomainError("point has dimension " + std::to_string(z.size()) + ", map expects " + std::to_string(dim));
}

}  // namespace

UniformMap UniformMap::identity(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) throw ParameterError("identity dimension must be in 1.." + std::to_string(kMaxDim));
  return UniformMap(make_node({Op::Identity, dim}));
}

UniformMap UniformMap::translation(double c) {
  require_shift(c, "translation");
  return UniformMap(make_node({Op::Translation, 1, c}));
}

UniformMap UniformMap::sawtooth(std::uint64_t periods) {
  if (periods < 1) throw ParameterError("sawtooth needs at least one period");
  return UniformMap(make_node({Op::Sawtooth, 1, 0.0, periods}));
}

UniformMap UniformMap::triangle(std::uint64_t periods) {
  if (periods < 1) throw ParameterError("triangle needs at least one period");
  return UniformMap(make_node({Op::Triangle, 1, 0.0, periods}));
}

UniformMap UniformMap::asym_triangle(double c) {
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("asymmetric triangle apex must lie in (0,1), got " + format_double(c));
  return UniformMap(make_node({Op::AsymTriangle, 1, c}));
}

UniformMap UniformMap::baker() { return UniformMap(make_node({Op::Baker, 2})); }
UniformMap UniformMap::arnold_cat() { return UniformMap(make_node({Op::ArnoldCat, 2})); }

UniformMap UniformMap::jitter(double c, std::size_t dim) {
  require_shift(c, "jitter");
  if (dim == 0 || dim > kMaxDim) throw ParameterError("jitter dimension must be in 1.." + std::to_string(kMaxDim));
  return UniformMap(make_node({Op::Jitter, dim, c}));
}

UniformMap UniformMap::product(const std::vector<UniformMap>& parts) {
  if (parts.empty()) throw ParameterError("product needs at least one factor");
  Node node{Op::Product, 0};
  for (const auto& p : parts) {
    node.dim += p.dim();
    node.children.push_back(p.root_);
  }
  if (node.dim > kMaxDim) throw ParameterError("product dimension exceeds " + std::to_string(kMaxDim));
  return UniformMap(make_node(std::move(node)));
}

UniformMap UniformMap::sequence(const std::vector<UniformMap>& steps) {
  if (steps.empty()) throw ParameterError("composition needs at least one map");
  Node node{Op::Sequence, steps.front().dim()};
  for (const auto& s : steps) {
    if (s.dim() != node.dim)
      throw ParameterError("cannot compose maps of dimension " + std::to_string(node.dim) + " and " + std::to_string(s.dim()));
    node.children.push_back(s.root_);
  }
  return UniformMap(make_node(std::move(node)));
}

std::size_t UniformMap::dim() const noexcept { return root_->dim; }

UniformMap UniformMap::with_jitter(double c) const { return sequence({*this, jitter(c, dim())}); }

bool UniformMap::has_jitter() const noexcept {
  return root_->op == Op::Sequence && !root_->children.empty() && root_->children.back()->op == Op::Jitter;
}

double UniformMap::jitter_amount() const noexcept { return has_jitter() ? root_->children.back()->c : 0.0; }

UniformMap UniformMap::without_jitter() const {
  if (!has_jitter()) return *this;
  if (root_->children.size() == 2) return UniformMap(root_->children.front());
  Node node = *root_;
  node.children.pop_back();
  return UniformMap(make_node(std::move(node)));
}

bool UniformMap::is_chaotic() const noexcept { return chaotic_node(*root_); }
bool UniformMap::is_identity() const noexcept { return identity_node(*root_); }

Point UniformMap::apply(const Point& z) const {
  require_point(z, dim());
  Point out(dim());
  apply_node(*root_, z.span(), out.span());
  return out;
}

double UniformMap::log_jacobian(const Point& z) const {
  require_point(z, dim());
  return log_jacobian_node(*root_, z.span());
}

std::vector<Point> UniformMap::inverse_images(const Point& y) const {
  require_point(y, dim());
  return preimages_node(*root_, y);
}

std::vector<double> UniformMap::branch_points() const {
  if (dim() != 1) throw CapabilityError("branch points are only defined for one-dimensional maps");
  return branch_points_node(*root_);
}

std::vector<double> UniformMap::theoretical_entropy() const { return entropy_node(*root_); }

std::string UniformMap::to_string() const { return node_to_string(*root_); }

UniformMap compose(const UniformMap& first, const UniformMap& second) { return UniformMap::sequence({first, second}); }

std::uint64_t period(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0) throw ParameterError("shift denominator must be positive");
  if (numerator < 0) throw ParameterError("shift numerator must be non-negative");
  const auto g = std::gcd(numerator, denominator);
  return static_cast<std::uint64_t>(denominator / g);
}

}  // namespace ifpp
