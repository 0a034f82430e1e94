#include "ifpp/rosenblatt.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ifpp/errors.hpp"
#include "ifpp/text.hpp"

namespace ifpp {

namespace {

void require_unit_point(const Point& p, std::size_t dim, const char* what) {
  if (p.size() != dim) throw DomainError(std::string(what) + " has dimension " + std::to_string(p.size()) +
                                         ", expected " + std::to_string(dim));
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " outside [0,1]: " + format_double(v));
  }
}

}  // namespace

RosenblattTransform RosenblattTransform::build(const DensityModel& model, std::vector<std::size_t> ordering) {
  const std::size_t d = model.dim();
  if (ordering.empty()) {
    ordering.resize(d);
    std::iota(ordering.begin(), ordering.end(), std::size_t{0});
  }
  std::vector<std::size_t> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted.size() != d || sorted[i] != i) throw ParameterError("ordering is not a permutation of the density's axes");
  }

  auto state = std::make_shared<State>(State{model, std::move(ordering), nullptr, {}});
  if (d == 2) {
    const std::size_t first = state->ordering[0];
    state->first = std::make_unique<MarginalTable>(marginal_grid(model, first));
    const std::size_t cells = first == 0 ? model.cols() : model.rows();
    state->conditionals.reserve(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      const double center = (static_cast<double>(i) + 0.5) / static_cast<double>(cells);
      state->conditionals.push_back(conditional_cdf_grid(model, center, first));
    }
  }
  return RosenblattTransform(std::move(state));
}

const MarginalTable* RosenblattTransform::first_table() const noexcept { return state_->first.get(); }

Point RosenblattTransform::forward(const Point& x) const {
  require_unit_point(x, dim(), "forward argument");
  if (dim() == 1) return Point{cdf_1d(state_->model, x[0])};
  const std::size_t a = state_->ordering[0];
  const std::size_t b = state_->ordering[1];
  const std::size_t cell = grid_cell(x[a], state_->first->cells());
  return Point{state_->first->cdf(x[a]), state_->conditionals[cell].cdf(x[b])};
}

Point RosenblattTransform::inverse(const Point& z) const {
  require_unit_point(z, dim(), "inverse argument");
  if (dim() == 1) return Point{idf_1d(state_->model, z[0])};
  const std::size_t a = state_->ordering[0];
  const std::size_t b = state_->ordering[1];
  Point x(2);
  x[a] = state_->first->inverse(z[0]);
  // Select the conditional from the inverted coordinate, exactly as forward does.
  const std::size_t cell = grid_cell(x[a], state_->first->cells());
  x[b] = state_->conditionals[cell].inverse(z[1]);
  return x;
}

double RosenblattTransform::jacobian_abs(const Point& x) const { return pdf_eval(state_->model, x); }

}  // namespace ifpp
