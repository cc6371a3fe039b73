#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bnlab/numerics.hpp"

using namespace bnlab;

TEST_CASE("unit sphere areas match the classical values") {
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(unit_sphere_area(4) ==
        doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
  CHECK(unit_sphere_area(5) ==
        doctest::Approx(8.0 * std::numbers::pi * std::numbers::pi / 3.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre integrates high-degree polynomials exactly") {
  const GaussRule& rule = gauss_legendre(8);
  double acc = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    acc += rule.weights[i] * (x * x * x * x * x * x * x * x * x * x);  // x^10
  }
  CHECK(acc == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature handles infinite tails") {
  const double v = integrate([](double x) { return std::exp(-x * x); }, 0.0,
                             std::numeric_limits<double>::infinity(), 1e-12);
  CHECK(v == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("sphere rule weights sum to the surface area") {
  for (int N : {3, 4, 5}) {
    const Vec c = Vec::Zero(N);
    const SphereRule rule = sphere_rule(N, c, 2.0, N == 3 ? 16 : 10);
    double total = 0;
    for (double w : rule.weights) total += w;
    CHECK(total ==
          doctest::Approx(unit_sphere_area(N) * std::pow(2.0, N - 1)).epsilon(1e-8));
  }
}

TEST_CASE("sphere rule integrates a coordinate moment") {
  // int_{S^2} x^2 over the unit sphere = (4 pi)/3.
  const Vec c = Vec::Zero(3);
  const SphereRule rule = sphere_rule(3, c, 1.0, 16);
  double acc = 0;
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    acc += rule.weights[k] * rule.points[k][0] * rule.points[k][0];
  }
  CHECK(acc == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-10));
}

TEST_CASE("halton points are deterministic and in the unit cube") {
  const auto a = halton_points(5, 100);
  const auto b = halton_points(5, 100);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] - b[i]).norm() == 0.0);
    CHECK(a[i].minCoeff() >= 0.0);
    CHECK(a[i].maxCoeff() < 1.0);
  }
}

TEST_CASE("sphere directions are unit length") {
  for (const auto& d : sphere_directions(5, 64)) {
    CHECK(std::abs(d.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x, y;
  for (int k = 1; k <= 10; ++k) {
    x.push_back(std::pow(10.0, 0.3 * k));
    y.push_back(7.5 * std::pow(x.back(), -2.5));
  }
  const LogLogFit fit = fit_loglog(x, y, 6);
  CHECK(fit.exponent == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(7.5).epsilon(1e-10));
  CHECK(fit.points_used == 6);
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("log-log fit rejects degenerate input") {
  CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), InsufficientData);
  CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, -2.0}), InsufficientData);
}
