#include "bnlab/radial.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "bnlab/numerics.hpp"

namespace bnlab {

namespace {

using State = std::array<real_t, 2>;

struct RadialRhs {
  int N;
  real_t two_star_m1;
  real_t q_m1;
  real_t epsilon;

  real_t force(real_t u) const {
    if (u <= 0) return 0;
    return std::pow(u, two_star_m1) + epsilon * std::pow(u, q_m1);
  }

  void operator()(const State& x, State& dxdr, real_t r) const {
    dxdr[0] = x[1];
    dxdr[1] = -(N - 1) / r * x[1] - force(x[0]);
  }
};

// Quintic Hermite basis on [0,1]; H2/H5 carry the second-derivative data.
struct Quintic {
  real_t f0, d0, s0, f1, d1, s1, h;

  real_t value(real_t t) const {
    const real_t t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const real_t H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const real_t H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const real_t H2 = 0.5L * t2 - 1.5L * t3 + 1.5L * t4 - 0.5L * t5;
    const real_t H3 = 10 * t3 - 15 * t4 + 6 * t5;
    const real_t H4 = -4 * t3 + 7 * t4 - 3 * t5;
    const real_t H5 = 0.5L * t3 - t4 + 0.5L * t5;
    return f0 * H0 + h * d0 * H1 + h * h * s0 * H2 + f1 * H3 + h * d1 * H4 + h * h * s1 * H5;
  }
  real_t deriv(real_t t) const {
    const real_t t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const real_t H0 = -30 * t2 + 60 * t3 - 30 * t4;
    const real_t H1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const real_t H2 = t - 4.5L * t2 + 6 * t3 - 2.5L * t4;
    const real_t H3 = 30 * t2 - 60 * t3 + 30 * t4;
    const real_t H4 = -12 * t2 + 28 * t3 - 15 * t4;
    const real_t H5 = 1.5L * t2 - 4 * t3 + 2.5L * t4;
    return (f0 * H0 + h * d0 * H1 + h * h * s0 * H2 + f1 * H3 + h * d1 * H4 +
            h * h * s1 * H5) / h;
  }
};

}  // namespace

real_t RadialProfile::second_deriv(real_t rr, real_t uu, real_t dd) const {
  const RadialRhs rhs{N, (static_cast<real_t>(N) + 2) / (N - 2), static_cast<real_t>(q) - 1,
                      epsilon};
  if (rr <= 0) return -rhs.force(uu) / N;
  return -(N - 1) / rr * dd - rhs.force(uu);
}

std::size_t RadialProfile::interval_of(real_t rr) const {
  if (rr < r.front() || rr > r.back() * (1 + 1e-15L)) {
    throw Error("radial profile evaluated outside its grid");
  }
  const auto it = std::upper_bound(r.begin(), r.end(), rr);
  std::size_t k = static_cast<std::size_t>(it - r.begin());
  if (k == 0) k = 1;
  if (k >= r.size()) k = r.size() - 1;
  return k - 1;
}

namespace {

Quintic interval_quintic(const RadialProfile& p, std::size_t k) {
  const real_t h = p.r[k + 1] - p.r[k];
  return Quintic{p.u[k],     p.du[k],     p.second_deriv(p.r[k], p.u[k], p.du[k]),
                 p.u[k + 1], p.du[k + 1], p.second_deriv(p.r[k + 1], p.u[k + 1], p.du[k + 1]),
                 h};
}

}  // namespace

real_t RadialProfile::value(real_t rr) const {
  const std::size_t k = interval_of(rr);
  return interval_quintic(*this, k).value((rr - r[k]) / (r[k + 1] - r[k]));
}

real_t RadialProfile::deriv(real_t rr) const {
  const std::size_t k = interval_of(rr);
  return interval_quintic(*this, k).deriv((rr - r[k]) / (r[k + 1] - r[k]));
}

real_t RadialProfile::integrate_grid(
    const std::function<real_t(real_t, real_t, real_t)>& f, real_t b) const {
  if (b > r.back() * (1 + 1e-12L)) throw Error("integration range exceeds the profile");
  const GaussRule& gl = gauss_legendre(6);
  real_t acc = 0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    const real_t a0 = r[k];
    const real_t a1 = std::min(r[k + 1], b);
    if (a1 <= a0) break;
    const Quintic qd = interval_quintic(*this, k);
    const real_t h = r[k + 1] - r[k];
    for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
      const real_t rr = 0.5L * (a0 + a1) + 0.5L * (a1 - a0) * static_cast<real_t>(gl.nodes[g]);
      const real_t w = 0.5L * (a1 - a0) * static_cast<real_t>(gl.weights[g]);
      const real_t t = (rr - r[k]) / h;
      acc += w * f(rr, qd.value(t), qd.deriv(t));
    }
    if (a1 >= b) break;
  }
  return acc;
}

void RadialProfile::validate_accepted(real_t boundary_tol) const {
  if (r.size() < 8) throw Error("profile grid too small");
  if (std::abs(u.front() - peak) > 1e-12L * peak || std::abs(du.front()) > 1e-12L * peak) {
    throw Error("profile does not start at (M, 0)");
  }
  if (std::abs(u.back()) > boundary_tol * peak) {
    throw Error("profile does not vanish at its boundary radius");
  }
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    if (u[k] <= 0) throw Error("profile loses positivity before the boundary");
    if (k > 0 && du[k] > 1e-12L * peak) throw Error("profile is not decreasing");
  }
}

ShotResult integrate_ivp(const ProblemParams& params, real_t M, const ShootOptions& opt) {
  if (!(M > 0)) throw ConfigError("peak height must be positive");
  const int N = params.N;
  const RadialRhs rhs{N, (static_cast<real_t>(N) + 2) / (N - 2),
                      static_cast<real_t>(params.q) - 1, static_cast<real_t>(params.epsilon)};

  RadialProfile profile;
  profile.N = N;
  profile.q = params.q;
  profile.epsilon = params.epsilon;
  profile.peak = M;

  // Series start: u = M - a r^2 + b r^4 + O(r^6) with a = f(M)/(2N) and
  // b = f(M) f'(M) / (8N(N+2)), started at a radius well inside the core.
  const real_t lambda_scale = std::pow(M, 2.0L / (N - 2));
  const real_t r0 = 1e-4L / std::sqrt(std::max(lambda_scale, 1.0L));
  const real_t fM = rhs.force(M);
  const real_t dfM = rhs.two_star_m1 * std::pow(M, rhs.two_star_m1 - 1) +
                     rhs.epsilon * rhs.q_m1 * std::pow(M, rhs.q_m1 - 1);
  const real_t a_ser = fM / (2 * N);
  const real_t b_ser = fM * dfM / (8.0L * N * (N + 2));

  profile.r.push_back(0);
  profile.u.push_back(M);
  profile.du.push_back(0);

  State x{M - a_ser * r0 * r0 + b_ser * r0 * r0 * r0 * r0,
          -2 * a_ser * r0 + 4 * b_ser * r0 * r0 * r0};
  real_t r = r0;
  profile.r.push_back(r);
  profile.u.push_back(x[0]);
  profile.du.push_back(x[1]);

  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_dopri5<State, real_t, State, real_t>;
  auto controlled = ode::make_controlled<Stepper>(opt.abs_tol_factor * M, opt.rel_tol);

  real_t dt = r0;
  std::optional<real_t> zero;
  long steps = 0;
  while (r < opt.r_max) {
    dt = std::min(dt, opt.max_step);
    dt = std::min(dt, opt.r_max - r);
    const real_t r_prev = r;
    const State x_prev = x;
    ode::controlled_step_result res;
    int tries = 0;
    do {
      res = controlled.try_step(rhs, x, r, dt);
      if (res == ode::fail && dt < 1e-20L) {
        throw StepUnderflow("step size underflow at r = " + std::to_string((double)r));
      }
      if (++tries > 200) throw StepUnderflow("step control failed to converge");
    } while (res == ode::fail);
    profile.r.push_back(r);
    profile.u.push_back(x[0]);
    profile.du.push_back(x[1]);
    if (++steps > opt.max_steps) throw StepUnderflow("step budget exhausted");

    if (x[0] < 0) {
      // Bracket the zero inside the last step with the interval interpolant.
      Quintic qd{x_prev[0],
                 x_prev[1],
                 profile.second_deriv(r_prev, x_prev[0], x_prev[1]),
                 x[0],
                 x[1],
                 profile.second_deriv(r, x[0], x[1]),
                 r - r_prev};
      real_t lo = 0, hi = 1;
      for (int it = 0; it < 200 && (hi - lo) * (r - r_prev) > 1e-14L; ++it) {
        const real_t mid = 0.5L * (lo + hi);
        (qd.value(mid) > 0 ? lo : hi) = mid;
      }
      const real_t t_star = 0.5L * (lo + hi);
      const real_t r_star = r_prev + t_star * (r - r_prev);
      profile.r.back() = r_star;
      profile.u.back() = qd.value(t_star);
      profile.du.back() = qd.deriv(t_star);
      zero = r_star;
      break;
    }
  }

  return ShotResult{zero, std::move(profile)};
}

namespace {

struct ShotCache {
  int N;
  double q;
  real_t M;
  const ShootOptions* opt;

  // first zero (or nullopt) at a trial eps
  std::optional<real_t> operator()(real_t eps) const {
    const ProblemParams p(N, q, static_cast<double>(eps));
    return integrate_ivp(p, M, *opt).first_zero;
  }
};

}  // namespace

HeightSolve epsilon_for_height(int N, double q, real_t M, const ShootOptions& opt,
                               std::optional<real_t> epsilon_clamp) {
  ProblemParams probe(N, q, 0.0);
  probe.require_rate_range();
  if (!(M > 1.0L)) throw ConfigError("peak height below the configured minimum of 1");

  const Constants c = constants(probe);
  const double R0 = 1.0 / ((N - 2) * unit_sphere_area(N));  // Robin value at the center
  // Height in the profile-parameter normalization (M/alpha_N)^{2/(N-2)}; the
  // single-peak balance constant q A^2 R / ((2*-q) B) is exact in it.
  const real_t lambda = std::pow(M / static_cast<real_t>(probe.alpha_N()), 2.0L / (N - 2));
  const real_t rate_expo = 0.5L * (N - 2) * static_cast<real_t>(q) - 2.0L;
  const real_t eps0 = static_cast<real_t>(q * c.A * c.A * R0 /
                                          ((probe.two_star() - q) * c.B)) *
                      std::pow(lambda, -rate_expo);

  auto clamped = [&](real_t e) {
    return epsilon_clamp ? std::min(e, *epsilon_clamp) : e;
  };
  ShotCache shoot{N, q, M, &opt};

  // Geometric scan over [eps0/1e3, eps0*1e3] for a sign change of
  // (first_zero - 1); absent zeros count as positive.
  const int scan_points = 13;
  real_t lo = 0, hi = 0;
  bool have_bracket = false;
  real_t prev_eps = 0;
  int prev_sign = 0;
  for (int k = 0; k < scan_points; ++k) {
    const real_t e = clamped(eps0 * std::pow(10.0L, -3.0L + 6.0L * k / (scan_points - 1)));
    const auto z = shoot(std::max(e, 0.0L));
    const int sign = (!z || *z > 1) ? +1 : -1;
    if (k > 0 && sign != prev_sign && e > prev_eps) {
      lo = prev_eps;
      hi = e;
      have_bracket = true;
      break;
    }
    prev_eps = e;
    prev_sign = sign;
  }
  if (!have_bracket) {
    throw NoSolution("no sign change of (first_zero - 1) over the scanned range; "
                     "the unperturbed critical equation admits no such profile");
  }

  // Safeguarded secant in log eps on F = log(first_zero), bisection fallback.
  auto F = [&](real_t e) -> std::optional<real_t> {
    const auto z = shoot(e);
    if (!z) return std::nullopt;
    return std::log(*z);
  };
  real_t slo = std::log(lo), shi = std::log(hi);
  std::optional<real_t> Flo = F(lo), Fhi = F(hi);
  real_t best_eps = hi;
  int used = 0;
  for (int it = 0; it < 100; ++it) {
    ++used;
    real_t s_next;
    if (Flo && Fhi && *Flo > 0 && *Fhi < 0) {
      s_next = slo - *Flo * (shi - slo) / (*Fhi - *Flo);
      if (!(s_next > slo && s_next < shi)) s_next = 0.5L * (slo + shi);
    } else {
      s_next = 0.5L * (slo + shi);
    }
    const real_t e = std::exp(s_next);
    const auto z = shoot(e);
    best_eps = e;
    if (z && std::abs(*z - 1.0L) <= 1e-9L) {
      auto result = integrate_ivp(ProblemParams(N, q, static_cast<double>(e)), M, opt);
      HeightSolve hs;
      hs.epsilon = e;
      hs.profile = std::move(result.profile);
      hs.iterations = used;
      hs.initializer = eps0;
      hs.profile.validate_accepted();
      return hs;
    }
    const bool above = (!z || *z > 1);
    if (above) {
      slo = s_next;
      Flo = z ? std::optional<real_t>(std::log(*z)) : std::nullopt;
    } else {
      shi = s_next;
      Fhi = std::log(*z);
    }
  }
  throw NoConvergence("secant on eps did not reach |first_zero - 1| <= 1e-9; last eps = " +
                      std::to_string(static_cast<double>(best_eps)));
}

RadialProfile solve_on_ball(const ProblemParams& params, const ShootOptions& opt) {
  params.require_rate_range();
  if (!(params.epsilon > 0)) {
    throw NoSolution("fixed-eps solve needs eps > 0 in the existence regime");
  }
  const Constants c = constants(params);
  const double R0 = 1.0 / ((params.N - 2) * unit_sphere_area(params.N));
  const real_t rate_expo = 0.5L * (params.N - 2) * params.q - 2.0L;
  const real_t lambda0 =
      std::pow(static_cast<real_t>(params.q * c.A * c.A * R0 /
                                   ((params.two_star() - params.q) * c.B * params.epsilon)),
               1.0L / rate_expo);
  const real_t M0 = std::max(
      static_cast<real_t>(params.alpha_N()) * std::pow(lambda0, 0.5L * (params.N - 2)),
      2.0L);

  auto zero_at = [&](real_t M) {
    return integrate_ivp(params, M, opt).first_zero;
  };

  // Bracket in log M around the initializer.
  real_t mlo = 0, mhi = 0;
  bool have = false;
  real_t prev = 0;
  int prev_sign = 0;
  for (int k = 0; k < 13; ++k) {
    const real_t M = M0 * std::pow(10.0L, -1.5L + 3.0L * k / 12.0L);
    const auto z = zero_at(M);
    const int sign = (!z || *z > 1) ? +1 : -1;
    if (k > 0 && sign != prev_sign) {
      mlo = std::min(prev, M);
      mhi = std::max(prev, M);
      have = true;
      break;
    }
    prev = M;
    prev_sign = sign;
  }
  if (!have) throw NoSolution("no peak height with first zero at 1 in the scanned range");

  real_t slo = std::log(mlo), shi = std::log(mhi);
  for (int it = 0; it < 100; ++it) {
    const real_t s = 0.5L * (slo + shi);
    const real_t M = std::exp(s);
    auto shot = integrate_ivp(params, M, opt);
    if (shot.first_zero && std::abs(*shot.first_zero - 1.0L) <= 1e-9L) {
      shot.profile.validate_accepted();
      return std::move(shot.profile);
    }
    const bool above = (!shot.first_zero || *shot.first_zero > 1);
    // At fixed eps a taller peak pulls the first zero inward, so the
    // still-positive side of the bracket is the small-M side.
    (above ? slo : shi) = s;
  }
  throw NoConvergence("peak-height bisection did not converge");
}

std::vector<SweepPoint> sweep_heights(int N, double q, const std::vector<real_t>& peaks,
                                      const ShootOptions& opt, int threads) {
  std::vector<SweepPoint> out(peaks.size());
  const int workers = std::max(1, threads);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= peaks.size()) return;
      SweepPoint& sp = out[i];
      sp.M = peaks[i];
      try {
        HeightSolve hs = epsilon_for_height(N, q, peaks[i], opt);
        sp.epsilon = hs.epsilon;
        sp.profile = std::move(hs.profile);
        sp.accepted = true;
      } catch (const Error& e) {
        sp.accepted = false;
        sp.note = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace bnlab
