#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bnlab/numerics.hpp"
#include "bnlab/problem.hpp"

using namespace bnlab;

namespace {

// Independent oracle: radial quadrature of int U_{0,1}^p over R^N.
double bubble_power_integral(int N, double p) {
  const double alpha = std::pow(static_cast<double>(N) * (N - 2), 0.25 * (N - 2));
  const double expo = 0.5 * (N - 2) * p;
  return unit_sphere_area(N) * std::pow(alpha, p) *
         integrate(
             [N, expo](double r) {
               return std::pow(r, N - 1) * std::pow(1.0 + r * r, -expo);
             },
             0.0, std::numeric_limits<double>::infinity(), 1e-12);
}

}  // namespace

TEST_CASE("closed-form constants match the quadrature oracle") {
  for (auto [N, q] : {std::pair{4, 2.5}, {5, 3.0}, {6, 2.4}}) {
    const ProblemParams params(N, q);
    const Constants c = constants(params);
    const double A_quad = bubble_power_integral(N, params.two_star() - 1.0);
    const double B_quad = bubble_power_integral(N, q);
    CHECK(std::abs(c.A - A_quad) <= 1e-8 * A_quad);
    CHECK(std::abs(c.B - B_quad) <= 1e-8 * B_quad);
    CHECK(c.A > 0);
    CHECK(c.B > 0);
  }
  CHECK(constant_A(5) == doctest::Approx(constants(ProblemParams(5, 3.0)).A).epsilon(1e-14));
}

TEST_CASE("derived exponents and normalizations") {
  const ProblemParams p(5, 3.0);
  CHECK(p.two_star() == doctest::Approx(10.0 / 3.0));
  CHECK(p.alpha_N() == doctest::Approx(std::pow(15.0, 0.75)));
  CHECK(p.beta_N() == doctest::Approx(std::pow(15.0, -0.5)));
}

TEST_CASE("parameter domain guards") {
  // q must exceed 2 at the parameter layer even where the Gamma argument of B
  // stays positive (q = 2 > N/(N-2) for N = 5).
  CHECK_THROWS_AS(ProblemParams(5, 2.0), ConfigError);
  CHECK_THROWS_AS(ProblemParams(2, 2.5), ConfigError);
  CHECK_THROWS_AS(ProblemParams(5, 4.0), ConfigError);  // above 2*
  CHECK_THROWS_AS(ProblemParams(5, 3.0, -1.0), ConfigError);

  // Gamma-argument guard: N = 3 needs q > 3 for B to exist.
  CHECK_THROWS_AS(constants(ProblemParams(3, 2.9)), ExponentOutOfRange);
  CHECK_NOTHROW(constants(ProblemParams(3, 3.5)));

  CHECK_THROWS_AS(ProblemParams(3, 2.5).require_reduced_range(), ExponentOutOfRange);
  CHECK_NOTHROW(ProblemParams(3, 3.5).require_reduced_range());
  CHECK_THROWS_AS(ProblemParams(3, 3.5).require_rate_range(), ExponentOutOfRange);
  CHECK_NOTHROW(ProblemParams(3, 4.5).require_rate_range());
  CHECK_NOTHROW(ProblemParams(5, 2.1).require_rate_range());
}
