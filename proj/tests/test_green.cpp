#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bnlab/bubbles.hpp"
#include "bnlab/green.hpp"

using namespace bnlab;

namespace {

constexpr double kPi = std::numbers::pi;

BallGreen unit_ball(int N) { return BallGreen(DomainSpec::make_ball(Vec::Zero(N), 1.0)); }

Vec pt(std::initializer_list<double> v) {
  Vec x(v.size());
  int i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

}  // namespace

TEST_CASE("fundamental solution at unit and scaled distances") {
  CHECK(singular_s(3, pt({0, 0, 0}), pt({1, 0, 0})) ==
        doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-14));
  const double omega5 = 8 * kPi * kPi / 3;
  CHECK(singular_s(5, Vec::Zero(5), 2 * Vec::Unit(5, 0)) ==
        doctest::Approx(1.0 / (3 * omega5 * 8)).epsilon(1e-14));
  CHECK_THROWS_AS(singular_s(3, pt({0, 0, 0}), pt({0, 0, 1e-15})), CoincidentPoints);
}

TEST_CASE("flux of the fundamental solution through small spheres is unity") {
  for (int N : {3, 5}) {
    const Vec x = 0.1 * Vec::Unit(N, 1);
    for (double r : {0.05, 0.1}) {
      const SphereRule rule = sphere_rule(N, x, r, N == 3 ? 24 : 12);
      double flux = 0;
      for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const Vec nu = (rule.points[k] - x) / r;
        // gradient of S(x, .) in the second argument via symmetry
        flux += rule.weights[k] * (-grad_x_singular_s(N, rule.points[k], x).dot(nu));
      }
      CHECK(flux == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("ball regular part at the center is constant") {
  const BallGreen g = unit_ball(3);
  const Vec zero = Vec::Zero(3);
  for (double r : {0.2, 0.5, 0.8}) {
    CHECK(g.regular_part(zero, r * Vec::Unit(3, 2)) ==
          doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-13));
  }
  CHECK(g.robin(zero) == doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-13));
}

TEST_CASE("ball green function: symmetry, bounds, boundary decay") {
  const BallGreen g = unit_ball(3);
  const Vec x = pt({0.31, -0.2, 0.11});
  const Vec y = pt({-0.4, 0.22, 0.37});
  const double G = g.green(x, y);
  CHECK(std::abs(G - g.green(y, x)) <= 1e-8 * std::abs(G));
  CHECK(G > 0);
  CHECK(G < singular_s(3, x, y));
  // y approaching the boundary
  const Vec dir = pt({0.3, 0.4, std::sqrt(1 - 0.25)}).normalized();
  CHECK(std::abs(g.green(x, 0.999999 * dir)) < 1e-5);
  CHECK_THROWS_AS(g.green(x, 1.5 * dir), OutsideDomain);
}

TEST_CASE("ball robin function boundary ratio approaches one linearly") {
  for (int N : {3, 5}) {
    const BallGreen g = unit_ball(N);
    const double omega = unit_sphere_area(N);
    double prev_err = 1;
    for (double d : {0.04, 0.02, 0.01}) {
      Vec x = (1.0 - d) * Vec::Unit(N, 0);
      const double ratio = g.robin(x) * (N - 2) * omega * std::pow(2 * d, N - 2);
      const double err = std::abs(ratio - 1.0);
      CHECK(err < 0.1);
      // linear trend: halving d roughly halves the error
      if (prev_err < 1) {
        CHECK(err < 0.75 * prev_err);
        CHECK(err > 0.25 * prev_err);
      }
      prev_err = err;
    }
  }
}

TEST_CASE("ball robin gradient vanishes at the center and grows along a ray") {
  const BallGreen g = unit_ball(5);
  CHECK(g.grad_robin(Vec::Zero(5)).norm() == 0.0);
  double prev = 0;
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double R = g.robin(s * Vec::Unit(5, 0));
    CHECK(R > prev);
    prev = R;
  }
}

TEST_CASE("ball derivatives agree with finite differences") {
  const BallGreen g = unit_ball(4);
  const Vec x = pt({0.3, -0.1, 0.2, 0.05});
  const Vec y = pt({-0.25, 0.4, -0.1, 0.3});
  const double h = 1e-5;

  SUBCASE("gradient of G in the first argument") {
    const Vec grad = g.grad_x_green(x, y);
    for (int i = 0; i < 4; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (g.green(xp, y) - g.green(xm, y)) / (2 * h);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  SUBCASE("mixed second derivatives") {
    const Mat cross = g.cross_derivs_green(x, y);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        Vec yp = y, ym = y;
        yp[j] += h;
        ym[j] -= h;
        const double fd =
            (g.grad_x_green(x, yp)[i] - g.grad_x_green(x, ym)[i]) / (2 * h);
        CHECK(cross(i, j) == doctest::Approx(fd).epsilon(5e-5));
      }
    }
    // swap + transpose symmetry
    const Mat swapped = g.cross_derivs_green(y, x);
    CHECK((cross - swapped.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("pure second derivatives in x") {
    const Mat hess = g.hess_x_green(x, y);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double fd =
            (g.grad_x_green(xp, y)[i] - g.grad_x_green(xm, y)[i]) / (2 * h);
        CHECK(hess(i, j) == doctest::Approx(fd).epsilon(5e-5));
      }
    }
  }
  SUBCASE("robin gradient and hessian") {
    const Vec gr = g.grad_robin(x);
    const Mat hr = g.hess_robin(x);
    for (int i = 0; i < 4; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      CHECK(gr[i] ==
            doctest::Approx((g.robin(xp) - g.robin(xm)) / (2 * h)).epsilon(1e-6));
      for (int j = 0; j < 4; ++j) {
        const double fd = (g.grad_robin(xp)[j] - g.grad_robin(xm)[j]) / (2 * h);
        CHECK(hr(i, j) == doctest::Approx(fd).epsilon(5e-5));
      }
    }
  }
}

TEST_CASE("gradient of G(0,.) is radial for the ball") {
  const BallGreen g = unit_ball(3);
  const Vec y = pt({0.3, 0.25, -0.1});
  // gradient in the second argument by symmetry
  const Vec grad = g.grad_x_green(y, Vec::Zero(3));
  const Vec radial = y.normalized();
  const double off_axis = (grad - grad.dot(radial) * radial).norm();
  CHECK(off_axis < 1e-12 * grad.norm());
}

TEST_CASE("regular part is discretely harmonic in the second argument") {
  const BallGreen g = unit_ball(3);
  const Vec x = pt({0.4, 0.1, -0.2});
  const double h = 1e-3;
  for (const Vec& y : {pt({0.1, 0.2, 0.3}), pt({-0.5, 0.1, 0.0}), pt({0.0, -0.3, 0.55})}) {
    double lap = -6.0 * g.regular_part(x, y);
    for (int j = 0; j < 3; ++j) {
      Vec yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      lap += g.regular_part(x, yp) + g.regular_part(x, ym);
    }
    lap /= h * h;
    CHECK(std::abs(lap) < 1e-4 * std::abs(g.regular_part(x, y)));
  }
}

TEST_CASE("collocation provider reproduces the analytic ball") {
  const DomainSpec cloud = ball_as_generic(Vec::Zero(3), 1.0, 32);
  const MfsGreen mfs(cloud);
  const BallGreen exact = unit_ball(3);
  CHECK(mfs.boundary_residual() <= mfs.options().validation_tol);
  CHECK(mfs.charge_points().size() > 100);

  // 50 deterministic pairs in the interior core, all quantities within 1e-5.
  const auto cube = halton_points(6, 600);
  int used = 0;
  double worst = 0;
  for (const auto& c : cube) {
    if (used >= 50) break;
    Vec x(3), y(3);
    for (int j = 0; j < 3; ++j) {
      x[j] = (2 * c[j] - 1) * 0.55;
      y[j] = (2 * c[3 + j] - 1) * 0.55;
    }
    if (x.norm() > 0.55 || y.norm() > 0.55 || (x - y).norm() < 0.05) continue;
    ++used;
    worst = std::max(worst, std::abs(mfs.green(x, y) - exact.green(x, y)));
    worst = std::max(worst, std::abs(mfs.regular_part(x, y) - exact.regular_part(x, y)));
    worst = std::max(worst, std::abs(mfs.robin(x) - exact.robin(x)));
  }
  REQUIRE(used == 50);
  CHECK(worst <= 1e-5);
}

TEST_CASE("collocation provider derivative consistency") {
  const DomainSpec cloud = ball_as_generic(Vec::Zero(3), 1.0, 32);
  const MfsGreen mfs(cloud);
  const Vec x = pt({0.3, -0.2, 0.1});
  const Vec y = pt({-0.1, 0.35, 0.2});
  const Vec grad = mfs.grad_x_green(x, y);
  const double h = 1e-4;
  for (int i = 0; i < 3; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (mfs.green(xp, y) - mfs.green(xm, y)) / (2 * h);
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
  }
  const BallGreen exact = unit_ball(3);
  CHECK((mfs.grad_robin(x) - exact.grad_robin(x)).norm() <
        1e-3 * exact.grad_robin(x).norm() + 1e-6);
}

TEST_CASE("provider rejects misuse") {
  const BallGreen g = unit_ball(3);
  CHECK_THROWS_AS(g.robin(pt({1.2, 0, 0})), OutsideDomain);
  CHECK_THROWS_AS(g.green(pt({0.2, 0, 0}), pt({0.2, 0, 0})), CoincidentPoints);
  MfsOptions strict;
  strict.validation_tol = 1e-30;
  CHECK_THROWS_AS(MfsGreen(ball_as_generic(Vec::Zero(3), 1.0, 16), strict),
                  ProviderNotBuilt);
  CHECK_THROWS_AS(DomainSpec::make_ball(Vec::Zero(3), -1.0), ConfigError);
}

TEST_CASE("harmonic extension matches the poisson kernel on the ball") {
  const BallGreen g = unit_ball(3);
  const BubbleParams b{pt({0.3, 0.0, 0.1}), 25.0};
  const HarmonicFn psi = g.harmonic_extension([&](const Vec& s) { return bubble(3, b, s); });

  const SphereRule rule = sphere_rule(3, Vec::Zero(3), 1.0, 48);
  auto poisson = [&](const Vec& x) {
    double acc = 0;
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
      const double kern = (1.0 - x.squaredNorm()) /
                          (unit_sphere_area(3) * std::pow((x - rule.points[k]).norm(), 3));
      acc += rule.weights[k] * kern * bubble(3, b, rule.points[k]);
    }
    return acc;
  };
  for (const Vec& x : {pt({0.0, 0.0, 0.0}), pt({0.4, 0.1, -0.2}), pt({-0.3, 0.5, 0.2})}) {
    const double expect = poisson(x);
    CHECK(psi(x) == doctest::Approx(expect).epsilon(1e-5));
  }
}
