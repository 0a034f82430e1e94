#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ifpp/diagnostics.hpp"
#include "ifpp/errors.hpp"
#include "ifpp/iterated_map.hpp"

using namespace ifpp;
using doctest::Approx;

namespace {

IteratedMap make(const DensityModel& m, const char* spec, JitterPolicy p = JitterPolicy::Auto) {
  return IteratedMap::factorize(RosenblattTransform::build(m), parse_uniform_map(spec, p));
}

double at(const IteratedMap& M, double x) { return M.apply(Point{x})[0]; }

std::vector<DensityModel> one_d_catalog() {
  return {DensityModel::triangular(), DensityModel::ramp(), DensityModel::arcsine(), DensityModel::uniform(),
          DensityModel::grid1d({0.5, 2.0, 1.0, 0.1, 3.0})};
}

}  // namespace

TEST_CASE("closed-form maps are reproduced") {
  const auto logistic = make(DensityModel::arcsine(), "triangle:1", JitterPolicy::Off);
  CHECK(at(logistic, 0.3) == Approx(0.84));
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    worst = std::max(worst, std::abs(at(logistic, x) - 4 * x * (1 - x)));
  }
  CHECK(worst < 1e-9);

  const auto mtri = make(DensityModel::triangular(), "triangle:1", JitterPolicy::Off);
  CHECK(at(mtri, 0.25) == Approx(std::sqrt(2.0) * 0.25));
  CHECK(at(mtri, 0.25) == Approx(0.353553).epsilon(1e-6));

  const auto mramp = make(DensityModel::ramp(), "triangle:1", JitterPolicy::Off);
  CHECK(at(mramp, 0.9) == Approx(std::sqrt(2.0) * std::sqrt(1 - 0.81)));
  CHECK(at(mramp, 0.9) == Approx(0.616441).epsilon(1e-6));
}

TEST_CASE("identity uniform map gives the identity") {
  for (const auto& m : one_d_catalog()) {
    const auto M = make(m, "identity");
    for (double x : {0.0, 0.2, 0.5, 0.93, 1.0}) {
      CHECK(std::abs(at(M, x) - x) < 1e-9);
      CHECK(M.log_jacobian(Point{x}) == 0.0);
    }
  }
  const auto M2 = IteratedMap::factorize(RosenblattTransform::build(DensityModel::checkerboard(4, 0.25, 1.75)), UniformMap::identity(2));
  CHECK(max_abs_diff(M2.apply(Point{0.3, 0.6}), Point{0.3, 0.6}) < 1e-9);
}

TEST_CASE("transport maps") {
  const auto uni = RosenblattTransform::build(DensityModel::uniform());
  const auto ramp = RosenblattTransform::build(DensityModel::ramp());
  // from the uniform density with U = identity: inverse sampling
  const auto inv = IteratedMap::transport(uni, ramp, UniformMap::identity());
  for (double x : {0.04, 0.25, 0.81}) CHECK(at(inv, x) == Approx(std::sqrt(x)));
  const auto same = IteratedMap::transport(ramp, ramp, UniformMap::identity());
  for (double x : {0.1, 0.5, 0.9}) CHECK(std::abs(at(same, x) - x) < 1e-9);
  CHECK(inv.is_transport());

  CHECK_THROWS_AS(IteratedMap::transport(uni, RosenblattTransform::build(DensityModel::uniform2d()), UniformMap::identity()),
                  ParameterError);
  CHECK_THROWS_AS(IteratedMap::factorize(ramp, UniformMap::baker()), ParameterError);
}

TEST_CASE("transported samples follow the target") {
  constexpr std::size_t n = 100000;
  const std::vector<std::pair<DensityModel, DensityModel>> pairs = {
      {DensityModel::ramp(), DensityModel::triangular()},
      {DensityModel::arcsine(), DensityModel::grid1d({1, 2, 3})},
      {DensityModel::checkerboard(4, 0.25, 1.75), DensityModel::grid2d(2, 2, {1, 3, 2, 2})},
  };
  for (const auto& [a, b] : pairs) {
    const auto RA = RosenblattTransform::build(a);
    const auto RB = RosenblattTransform::build(b);
    for (const char* spec : {"identity", "asym:0.3"}) {
      if (a.dim() == 2 && std::string(spec) != "identity") continue;
      const auto M = IteratedMap::transport(RA, RB, parse_uniform_map(a.dim() == 2 ? "identity:2" : spec));
      std::vector<Point> zs;
      for (const auto& x : sample_density(a, n, 99)) zs.push_back(RB.forward(M.apply(x)));
      for (double ks : ks_uniformity(zs)) CHECK(ks < 0.01);
    }
  }
}

TEST_CASE("log Jacobian matches finite differences") {
  constexpr double h = 1e-7;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unif(0.02, 0.98);
  for (const auto& m : one_d_catalog()) {
    for (const char* spec : {"triangle:1", "sawtooth:3", "asym:0.3", "translation:0.4"}) {
      const auto M = make(m, spec, JitterPolicy::Off);
      int checked = 0;
      for (int i = 0; i < 2000 && checked < 200; ++i) {
        const double x = unif(rng);
        const double a = at(M, x - h), b = at(M, x + h);
        const double fd = (b - a) / (2 * h);
        // skip points where the secant straddles a branch or a density kink
        const double slope = std::exp(M.log_jacobian(Point{x}));
        if (std::abs(b - a) > 0.5 || std::abs(M.log_jacobian(Point{x - h}) - M.log_jacobian(Point{x + h})) > 1e-3) continue;
        REQUIRE(std::abs(std::abs(fd) - slope) < 1e-4 * std::max(1.0, slope));
        ++checked;
      }
      CHECK(checked > 100);
    }
  }
}

TEST_CASE("commuting identity") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& m : one_d_catalog()) {
    for (const char* spec : {"triangle:1", "sawtooth:3", "asym:0.9", "translation:0.6"}) {
      const auto M = make(m, spec);
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const Point x{unif(rng)};
        worst = std::max(worst, max_abs_diff(M.source().forward(M.apply(x)), M.uniform().apply(M.source().forward(x))));
      }
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("conjugate uniform maps") {
  const auto R = RosenblattTransform::build(DensityModel::arcsine());
  const auto t1 = conjugate_uniform([](const Point& x) { return Point{4 * x[0] * (1 - x[0])}; }, R);
  const auto id = conjugate_uniform([](const Point& x) { return x; }, R);
  const auto M = make(DensityModel::ramp(), "sawtooth:3", JitterPolicy::Off);
  const auto s3 = conjugate_uniform([&](const Point& x) { return M.apply(x); }, M.source());
  double w_t = 0.0, w_id = 0.0, w_s = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double z = (i + 0.5) / 1000.0;
    w_t = std::max(w_t, std::abs(t1(Point{z})[0] - (1 - 2 * std::abs(z - 0.5))));
    w_id = std::max(w_id, std::abs(id(Point{z})[0] - z));
    const double s = std::fmod(3 * z, 1.0);
    // sawtooth jumps: compare on the circle
    w_s = std::max(w_s, std::min(std::abs(s3(Point{z})[0] - s), 1 - std::abs(s3(Point{z})[0] - s)));
  }
  CHECK(w_t < 1e-9);
  CHECK(w_id < 1e-9);
  CHECK(w_s < 1e-9);
}

TEST_CASE("orbits") {
  const auto logistic = make(DensityModel::arcsine(), "triangle:1", JitterPolicy::Off);
  const auto o = orbit(logistic, Point{0.3}, 3);
  REQUIRE(o.points.size() == 3);
  CHECK(o.points[0][0] == Approx(0.84).epsilon(1e-12));
  CHECK(o.points[1][0] == Approx(0.5376).epsilon(1e-12));
  CHECK(o.points[2][0] == Approx(0.99434496).epsilon(1e-12));
  CHECK(o.step_of(2) == 3);

  const auto id = make(DensityModel::ramp(), "identity");
  const auto c = orbit(id, Point{0.3}, 10);
  for (const auto& p : c.points) CHECK(p[0] == 0.3);

  const auto thinned = orbit(logistic, Point{0.3}, 10, {.burn_in = 2, .thin = 3});
  CHECK(thinned.points.size() == 3);
  CHECK(thinned.step_of(0) == 5);
  CHECK(thinned.points[0][0] == Approx(orbit(logistic, Point{0.3}, 5).points[4][0]));
  CHECK_THROWS_AS(orbit(logistic, Point{0.3}, 10, {.thin = 0}), ParameterError);
  CHECK_THROWS_AS(orbit(logistic, Point{1.3}, 10), DomainError);
}

TEST_CASE("rational translations are periodic") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& m : one_d_catalog()) {
    const auto M = make(m, "translation:2/5");
    for (int s = 0; s < 10; ++s) {
      const Point x0{unif(rng)};
      const auto o = orbit(M, x0, 5);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(o.points[k][0] - x0[0]) > 1e-6);
      CHECK(std::abs(o.points[4][0] - x0[0]) < 1e-12);
    }
  }
}

TEST_CASE("orbit through the uniform map") {
  const auto id = make(DensityModel::triangular(), "identity");
  const auto c = orbit_via_uniform(id, Point{0.3}, 10);
  for (const auto& p : c.points) CHECK(p[0] == c.points[0][0]);
  CHECK(std::abs(c.points[0][0] - 0.3) < 1e-12);

  // distributions agree even though pointwise paths separate under chaos;
  // 10 bins keep the sampling noise of two 1e4-point histograms near 0.01
  const auto M = make(DensityModel::triangular(), "triangle:1");
  const auto direct = histogram(orbit(M, Point{0.3}, 10000), {10});
  const auto via = histogram(orbit_via_uniform(M, Point{0.3}, 10000), {10});
  CHECK(tv_distance(direct, via) < 0.02);

  // the first few steps still coincide
  const auto a = orbit(M, Point{0.3}, 5);
  const auto b = orbit_via_uniform(M, Point{0.3}, 5);
  for (int k = 0; k < 5; ++k) CHECK(a.points[k][0] == Approx(b.points[k][0]).epsilon(1e-9));
}

TEST_CASE("preimages of the induced map") {
  const auto logistic = make(DensityModel::arcsine(), "triangle:1", JitterPolicy::Off);
  auto pre = logistic.inverse_images(Point{0.5});
  REQUIRE(pre.size() == 2);
  std::sort(pre.begin(), pre.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
  CHECK(pre[0][0] == Approx((1 - std::sqrt(0.5)) / 2));
  CHECK(pre[1][0] == Approx((1 + std::sqrt(0.5)) / 2));
}
