#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bnlab/numerics.hpp"
#include "bnlab/radial.hpp"

using namespace bnlab;

namespace {

// Closed-form profile of the unperturbed critical equation with peak M:
// U_{0,l}(r) with alpha_N l^{(N-2)/2} = M.
real_t exact_bubble(int N, real_t M, real_t r) {
  const real_t alpha = std::pow(static_cast<real_t>(N) * (N - 2), 0.25L * (N - 2));
  const real_t lam = std::pow(M / alpha, 2.0L / (N - 2));
  return alpha * std::pow(lam / (1 + lam * lam * r * r), 0.5L * (N - 2));
}

// Independent fixed-step RK4 integrator used as a cross-check oracle.
std::optional<double> rk4_first_zero(int N, double q, double eps, double M, double rmax,
                                     int steps) {
  const double two_star_m1 = (N + 2.0) / (N - 2.0);
  auto force = [&](double u) {
    return u <= 0 ? 0.0 : std::pow(u, two_star_m1) + eps * std::pow(u, q - 1.0);
  };
  const double r0 = 1e-6;
  double u = M - force(M) / (2.0 * N) * r0 * r0;
  double v = -force(M) / N * r0;
  double r = r0;
  const double h = (rmax - r0) / steps;
  auto f = [&](double rr, double uu, double vv, double& du, double& dv) {
    du = vv;
    dv = -(N - 1) / rr * vv - force(uu);
  };
  for (int k = 0; k < steps; ++k) {
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    f(r, u, v, k1u, k1v);
    f(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
    f(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
    f(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
    const double un = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    const double vn = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    const double rn = r + h;
    if (un < 0) {
      return r + h * u / (u - un);  // linear interpolation of the crossing
    }
    u = un;
    v = vn;
    r = rn;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("unperturbed shot reproduces the closed-form bubble") {
  const ProblemParams params(5, 3.0, 0.0);
  const real_t M = 50.0L;
  ShootOptions opt;
  opt.r_max = 1.0L;
  const ShotResult shot = integrate_ivp(params, M, opt);
  CHECK(!shot.first_zero.has_value());

  real_t worst = 0;
  for (double r : {0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const real_t expect = exact_bubble(5, M, r);
    worst = std::max(worst, std::abs(shot.profile.value(r) - expect) / expect);
  }
  CHECK(static_cast<double>(worst) < 1e-8);
}

TEST_CASE("perturbed shot crosses zero and matches a coarse integrator") {
  const ProblemParams params(5, 3.0, 5.0);
  const ShotResult shot = integrate_ivp(params, 3.0L);
  REQUIRE(shot.first_zero.has_value());
  const auto coarse = rk4_first_zero(5, 3.0, 5.0, 3.0, 10.0, 400000);
  REQUIRE(coarse.has_value());
  CHECK(static_cast<double>(*shot.first_zero) == doctest::Approx(*coarse).epsilon(1e-6));

  // the sign change is bracketed to machine-level width and the stored grid
  // ends at the crossing
  CHECK(std::abs(shot.profile.u.back()) < 1e-10L);
  CHECK(shot.profile.r.back() == *shot.first_zero);
}

TEST_CASE("height solve hits the unit radius and stays near the initializer") {
  const HeightSolve hs = epsilon_for_height(5, 3.0, 1000.0L);
  CHECK(std::abs(hs.profile.radius() - 1.0L) <= 1e-9L);
  CHECK(std::abs(hs.profile.u.back()) < 1e-9L * hs.profile.peak);
  // asymptotic initializer within 20% at this height
  CHECK(std::abs(static_cast<double>(hs.epsilon - hs.initializer)) <
        0.2 * static_cast<double>(hs.initializer));
  hs.profile.validate_accepted();

  // independent bisection oracle on the same bracket
  const ProblemParams probe(5, 3.0, 0.0);
  real_t lo = hs.initializer / 10, hi = hs.initializer * 10;
  for (int it = 0; it < 60; ++it) {
    const real_t mid = 0.5L * (lo + hi);
    const ShotResult s = integrate_ivp(ProblemParams(5, 3.0, (double)mid), 1000.0L);
    const bool above = !s.first_zero || *s.first_zero > 1;
    (above ? lo : hi) = mid;
  }
  CHECK(static_cast<double>(hs.epsilon) ==
        doctest::Approx(static_cast<double>(0.5L * (lo + hi))).epsilon(1e-6));
}

TEST_CASE("clamping the perturbation to zero reports no solution") {
  CHECK_THROWS_AS(epsilon_for_height(5, 3.0, 100.0L, ShootOptions{}, 0.0L), NoSolution);
}

TEST_CASE("eps decreases along a geometric height grid") {
  real_t prev = std::numeric_limits<real_t>::infinity();
  for (double M : {100.0, 400.0, 1600.0, 6400.0}) {
    const HeightSolve hs = epsilon_for_height(5, 3.0, static_cast<real_t>(M));
    CHECK(hs.epsilon < prev);
    prev = hs.epsilon;
  }
}

TEST_CASE("fixed-eps solve inverts the height solve") {
  const HeightSolve hs = epsilon_for_height(5, 3.0, 500.0L);
  const ProblemParams params(5, 3.0, static_cast<double>(hs.epsilon));
  const RadialProfile back = solve_on_ball(params);
  CHECK(std::abs(back.peak - 500.0L) < 1e-6L * 500.0L);

  // smaller eps concentrates harder
  real_t prev_peak = 0;
  for (double scale : {1.0, 0.5, 0.25}) {
    const ProblemParams p(5, 3.0, static_cast<double>(hs.epsilon) * scale);
    const RadialProfile prof = solve_on_ball(p);
    CHECK(prof.peak > prev_peak);
    prev_peak = prof.peak;
  }
}

TEST_CASE("tolerance refinement leaves the profile stable") {
  ShootOptions loose;
  loose.rel_tol = 1e-11L;
  ShootOptions tight;
  tight.rel_tol = 5e-12L;
  const ProblemParams params(5, 3.0, 2.0);
  const ShotResult a = integrate_ivp(params, 10.0L, loose);
  const ShotResult b = integrate_ivp(params, 10.0L, tight);
  CHECK(std::abs(a.profile.value(0.5L) - b.profile.value(0.5L)) <= 1e-9L);
}

TEST_CASE("accepted profiles are positive and decreasing") {
  const HeightSolve hs = epsilon_for_height(6, 2.4, 300.0L);
  const RadialProfile& p = hs.profile;
  for (std::size_t k = 0; k + 1 < p.r.size(); ++k) {
    CHECK(p.u[k] > 0);
    if (k > 0) CHECK(p.du[k] <= 1e-12L * p.peak);
  }
  CHECK(p.u.front() == p.peak);
  CHECK(p.du.front() == 0.0L);
}

TEST_CASE("grid quadrature integrates stored profiles accurately") {
  // For the unperturbed bubble, int_0^1 u'(r)^2 r^{N-1} dr is computable from
  // the closed form; compare against the grid quadrature.
  const ProblemParams params(5, 3.0, 0.0);
  ShootOptions opt;
  opt.r_max = 1.0L;
  const ShotResult shot = integrate_ivp(params, 20.0L, opt);
  const real_t grid_val = shot.profile.integrate_grid(
      [&](real_t, real_t, real_t du) { return du * du; }, 1.0L);
  const double alpha = ProblemParams(5, 3.0, 0.0).alpha_N();
  const double lam = std::pow(20.0 / alpha, 2.0 / 3.0);
  const double quad = integrate(
      [&](double r) {
        const double den = 1 + lam * lam * r * r;
        const double du = -alpha * 3.0 * std::pow(lam, 3.5) * r / std::pow(den, 2.5);
        return du * du;
      },
      0.0, 1.0, 1e-12);
  CHECK(static_cast<double>(grid_val) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("rejects nonsensical requests") {
  CHECK_THROWS_AS(integrate_ivp(ProblemParams(5, 3.0, 0.0), -1.0L), ConfigError);
  CHECK_THROWS_AS(epsilon_for_height(5, 3.0, 0.5L), ConfigError);
  CHECK_THROWS_AS(solve_on_ball(ProblemParams(5, 3.0, 0.0)), NoSolution);
  // N = 3 rate regime needs q > 4
  CHECK_THROWS_AS(epsilon_for_height(3, 3.5, 100.0L), ExponentOutOfRange);
}
