#include "bnlab/asympt.hpp"

#include <algorithm>
#include <cmath>

namespace bnlab {

namespace {

real_t bubble_radial(int N, real_t lambda, real_t r) {
  const real_t alpha = std::pow(static_cast<real_t>(N) * (N - 2), 0.25L * (N - 2));
  return alpha * std::pow(lambda / (1 + lambda * lambda * r * r), 0.5L * (N - 2));
}

real_t bubble_radial_deriv(int N, real_t lambda, real_t r) {
  const real_t alpha = std::pow(static_cast<real_t>(N) * (N - 2), 0.25L * (N - 2));
  const real_t den = 1 + lambda * lambda * r * r;
  return -alpha * (N - 2) * std::pow(lambda, 0.5L * (N + 2)) * r / std::pow(den, 0.5L * N);
}

// Radial H^1_0 distance^2 between the profile and the projected bubble with
// parameter lambda (psi is constant for a centered bubble, so only the bubble
// derivative enters).
real_t remainder_norm_sq(const RadialProfile& p, real_t lambda) {
  const int N = p.N;
  const real_t omega = static_cast<real_t>(unit_sphere_area(N));
  const real_t val = p.integrate_grid(
      [&](real_t r, real_t, real_t du) {
        const real_t diff = du - bubble_radial_deriv(N, lambda, r);
        return diff * diff * std::pow(r, N - 1);
      },
      p.radius());
  return omega * val;
}

}  // namespace

DecompositionReport extract_bubble(const RadialProfile& profile, FitMode mode) {
  const int N = profile.N;
  const real_t beta = std::pow(static_cast<real_t>(N) * (N - 2), -0.5L);
  const real_t lambda_peak = std::pow(profile.peak, 2.0L / (N - 2));

  DecompositionReport rep;
  rep.x_eps = Vec::Zero(N);
  rep.fit_mode = mode;
  rep.mu = {1.0};

  real_t lambda_bubble = beta * lambda_peak;
  if (mode == FitMode::projection) {
    // Golden-section minimization of the remainder norm over the bubble
    // parameter; the peak-anchored value is the natural starting window.
    const real_t gr = 0.5L * (std::sqrt(5.0L) - 1.0L);
    real_t a = 0.5L * lambda_bubble, b = 2.0L * lambda_bubble;
    real_t c = b - gr * (b - a), d = a + gr * (b - a);
    real_t fc = remainder_norm_sq(profile, c), fd = remainder_norm_sq(profile, d);
    while ((b - a) > 1e-10L * lambda_bubble) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = remainder_norm_sq(profile, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = remainder_norm_sq(profile, d);
      }
    }
    lambda_bubble = 0.5L * (a + b);
  }

  rep.lambda_bubble = static_cast<double>(lambda_bubble);
  rep.lambda = static_cast<double>(lambda_bubble / beta);
  rep.w_norm_h1 = static_cast<double>(std::sqrt(remainder_norm_sq(profile, lambda_bubble)));
  return rep;
}

double rescaled_profile_gap(const RadialProfile& profile, double y_max) {
  const int N = profile.N;
  const real_t lambda_peak = std::pow(profile.peak, 2.0L / (N - 2));
  const real_t beta = std::pow(static_cast<real_t>(N) * (N - 2), -0.5L);
  real_t gap = 0;
  for (int k = 0; k <= 400; ++k) {
    const real_t y = y_max * k / 400.0L;
    const real_t r = y / lambda_peak;
    if (r > profile.radius()) break;
    const real_t v = std::pow(lambda_peak, -0.5L * (N - 2)) * profile.value(r);
    const real_t std_bubble = bubble_radial(N, beta, y);
    gap = std::max(gap, std::abs(v - std_bubble));
  }
  return static_cast<double>(gap);
}

SweepAnalysis analyze_sweep(const std::vector<SweepPoint>& sweep) {
  SweepAnalysis out;
  for (const auto& sp : sweep) {
    if (!sp.accepted) continue;
    const auto peak_rep = extract_bubble(sp.profile, FitMode::peak);
    const auto proj_rep = extract_bubble(sp.profile, FitMode::projection);
    out.lambda.push_back(proj_rep.lambda_bubble);
    out.lambda_peak.push_back(peak_rep.lambda);
    out.epsilon.push_back(static_cast<double>(sp.epsilon));
    out.w_norm.push_back(proj_rep.w_norm_h1);
  }
  if (out.lambda.size() < 5) {
    throw InsufficientData("sweep has fewer than 5 accepted profiles");
  }
  const auto [mn, mx] = std::minmax_element(out.lambda.begin(), out.lambda.end());
  if (*mx / *mn < 100.0) {
    throw InsufficientData("sweep spans less than two decades in lambda");
  }
  return out;
}

RateFit verify_blowup_rate(const SweepAnalysis& sweep, int last_k) {
  const LogLogFit f = fit_loglog(sweep.lambda, sweep.epsilon, last_k);
  return RateFit{f.exponent, f.constant, f.r_squared, f.points_used};
}

WDecayLaw w_decay_law(int N, double q) {
  if (N == 3 && q > 4 && q < 6) return {-1.0, 0.0};
  if (N == 4) {
    if (q > 2 && q < 2.5) return {-(2 * q - 3), 0.0};
    if (q == 2.5) return {-2.0, 0.75};
    if (q > 2.5 && q < 4) return {-2.0, 0.0};
  }
  if (N == 5) {
    const double brk = 13.0 / 6.0;
    if (q > 2 && q < brk) return {-(6 * q - 7) / 2, 0.0};
    if (q == brk) return {-3.0, 0.7};
    if (q > brk && q < 10.0 / 3.0) return {-3.0, 0.0};
  }
  if (N >= 6 && q > 2 && q < 2.0 * N / (N - 2)) {
    return {-(N + 2) / 2.0, (N + 2) / (2.0 * N)};
  }
  throw ExponentOutOfRange("no remainder-decay row for N=" + std::to_string(N) +
                           ", q=" + std::to_string(q));
}

RateFit verify_w_decay(const SweepAnalysis& sweep, int N, double q, int last_k) {
  const WDecayLaw law = w_decay_law(N, q);
  std::vector<double> w = sweep.w_norm;
  if (law.log_power != 0) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] /= std::pow(std::log(sweep.lambda[i]), law.log_power);
    }
  }
  const LogLogFit f = fit_loglog(sweep.lambda, w, last_k);
  return RateFit{f.exponent, f.constant, f.r_squared, f.points_used};
}

double F_rate(int N, double q, double lambda) {
  if (!(lambda > 1)) throw ExponentOutOfRange("F_{N,q} needs lambda > 1");
  if (N == 3 && q > 4 && q < 6) return 1.0 / lambda;
  if (N == 4) {
    if (q > 2 && q < 3) return std::pow(lambda, -(2 * q - 4));
    if (q >= 3 && q < 4) return std::log(lambda) / (lambda * lambda);
  }
  if (N == 5) {
    const double brk = 7.0 / 3.0;
    if (q > 2 && q < brk) return std::pow(lambda, -(3 * q - 5));
    if (q >= brk && q < 10.0 / 3.0) return 1.0 / (lambda * lambda);
  }
  if (N >= 6 && q > 2 && q < 2.0 * N / (N - 2)) return 1.0 / (lambda * lambda);
  throw ExponentOutOfRange("no concentration-speed row for N=" + std::to_string(N) +
                           ", q=" + std::to_string(q));
}

ConcentrationReport verify_concentration(const SweepAnalysis& sweep,
                                         const GreenProvider& provider,
                                         const ProblemParams& params) {
  ConcentrationReport rep;
  rep.lambda_star = single_peak_lambda(provider, params, provider.domain().center);
  const double expo = 2.0 / ((params.N - 2) * params.q - 4.0);
  for (std::size_t i = 0; i < sweep.lambda.size(); ++i) {
    const double lam_lim = 1.0 / (std::pow(sweep.epsilon[i], expo) * sweep.lambda[i]);
    const double dev = std::abs(rep.lambda_star - lam_lim);
    rep.deviation.push_back(dev);
    rep.ratio.push_back(dev / F_rate(params.N, params.q, sweep.lambda[i]));
  }
  rep.max_ratio = *std::max_element(rep.ratio.begin(), rep.ratio.end());
  rep.x_deviation = 0.0;
  return rep;
}

SandwichReport sandwich_check(const RadialProfile& profile) {
  const int N = profile.N;
  const real_t beta = std::pow(static_cast<real_t>(N) * (N - 2), -0.5L);
  const real_t lambda = beta * std::pow(profile.peak, 2.0L / (N - 2));
  real_t top = 0, bot = std::numeric_limits<real_t>::infinity();
  for (std::size_t k = 0; k < profile.r.size(); ++k) {
    const real_t r = profile.r[k];
    if (r > 0.75L) break;
    const real_t ratio = profile.u[k] / bubble_radial(N, lambda, r);
    top = std::max(top, ratio);
    bot = std::min(bot, ratio);
  }
  return SandwichReport{static_cast<double>(top), static_cast<double>(bot)};
}

GreenLimitReport green_limit_check(const RadialProfile& profile,
                                   const GreenProvider& provider,
                                   const std::vector<double>& radii) {
  const int N = profile.N;
  const real_t beta = std::pow(static_cast<real_t>(N) * (N - 2), -0.5L);
  const real_t lambda = beta * std::pow(profile.peak, 2.0L / (N - 2));
  const double A = constant_A(N);
  GreenLimitReport rep;
  rep.radii = radii;
  for (double r : radii) {
    const double scaled =
        static_cast<double>(std::pow(lambda, 0.5L * (N - 2)) * profile.value(r));
    Vec y = provider.domain().center;
    y[0] += r;
    const double gside = A * provider.green(provider.domain().center, y);
    rep.scaled_u.push_back(scaled);
    rep.green_side.push_back(gside);
    rep.rel_gap.push_back(std::abs(scaled - gside) / std::abs(gside));
  }
  return rep;
}

PohozaevReport pohozaev_global(const RadialProfile& profile) {
  const int N = profile.N;
  const real_t rho = profile.radius();
  if (std::abs(profile.u.back()) > 1e-8L * profile.peak) {
    throw Error("global balance needs a vanishing boundary trace");
  }
  const real_t omega = static_cast<real_t>(unit_sphere_area(N));
  const real_t du_b = profile.du.back();
  const real_t lhs = omega * std::pow(rho, static_cast<real_t>(N)) * du_b * du_b /
                     (2.0L * N);
  const real_t q = profile.q;
  const real_t two_star = 2.0L * N / (N - 2);
  const real_t vol = profile.integrate_grid(
      [&](real_t r, real_t u, real_t) {
        return std::pow(std::max(u, 0.0L), q) * std::pow(r, N - 1);
      },
      rho);
  const real_t rhs = (1.0L / q - 1.0L / two_star) * profile.epsilon * omega * vol;
  PohozaevReport rep;
  rep.lhs = static_cast<double>(lhs);
  rep.rhs = static_cast<double>(rhs);
  rep.relative_residual = static_cast<double>(
      std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
  return rep;
}

PohozaevReport pohozaev_local(const RadialProfile& profile, real_t rho) {
  const int N = profile.N;
  if (!(rho > 0) || rho > profile.radius() * (1 + 1e-12L)) {
    throw Error("local balance radius outside the profile");
  }
  const real_t omega = static_cast<real_t>(unit_sphere_area(N));
  const real_t q = profile.q;
  const real_t two_star = 2.0L * N / (N - 2);
  const real_t u_rho = rho < profile.radius() ? profile.value(rho) : profile.u.back();
  const real_t du_rho = rho < profile.radius() ? profile.deriv(rho) : profile.du.back();
  const real_t surf = omega * std::pow(rho, N - 1);

  // Boundary terms of the multiplier identity with x0 = 0:
  //   -S[u_nu <x, grad u>] + 1/2 S[|grad u|^2 <x,nu>] - (N-2)/2 S[u_nu u]
  const real_t lhs = surf * (-rho * du_rho * du_rho + 0.5L * rho * du_rho * du_rho -
                             0.5L * (N - 2) * du_rho * u_rho);
  const real_t up = std::max(u_rho, 0.0L);
  const real_t vol = profile.integrate_grid(
      [&](real_t r, real_t u, real_t) {
        return std::pow(std::max(u, 0.0L), q) * std::pow(r, N - 1);
      },
      rho);
  const real_t rhs = surf * rho *
                         (std::pow(up, two_star) / two_star +
                          profile.epsilon * std::pow(up, q) / q) -
                     profile.epsilon * (2.0L * N - (N - 2) * q) / (2.0L * q) * omega * vol;
  PohozaevReport rep;
  rep.lhs = static_cast<double>(lhs);
  rep.rhs = static_cast<double>(rhs);
  rep.relative_residual = static_cast<double>(
      std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
  return rep;
}

namespace {

double surface_form_P(int N, const FieldWithGrad& u, const FieldWithGrad& v,
                      const Vec& center, double theta, int level) {
  const SphereRule rule = sphere_rule(N, center, theta, level);
  double acc = 0;
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    const Vec& y = rule.points[k];
    const Vec nu = (y - center) / theta;
    const Vec gu = u.grad(y);
    const Vec gv = v.grad(y);
    const double un = gu.dot(nu), vn = gv.dot(nu);
    const double term = -theta * un * vn + 0.5 * theta * gu.dot(gv) +
                        0.25 * (2 - N) * (un * v.value(y) + vn * u.value(y));
    acc += rule.weights[k] * term;
  }
  return acc;
}

double surface_form_Q(int N, const FieldWithGrad& u, const FieldWithGrad& v,
                      const Vec& center, double theta, int i, int level) {
  const SphereRule rule = sphere_rule(N, center, theta, level);
  double acc = 0;
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    const Vec& y = rule.points[k];
    const Vec nu = (y - center) / theta;
    const Vec gu = u.grad(y);
    const Vec gv = v.grad(y);
    const double term = -gv.dot(nu) * gu[i] - gu.dot(nu) * gv[i] + gu.dot(gv) * nu[i];
    acc += rule.weights[k] * term;
  }
  return acc;
}

}  // namespace

double quadratic_form_P(int N, const FieldWithGrad& u, const FieldWithGrad& v,
                        const Vec& center, double theta) {
  const int level = N == 3 ? 24 : 10;
  const double coarse = surface_form_P(N, u, v, center, theta, level);
  const double fine = surface_form_P(N, u, v, center, theta, level + 8);
  if (std::abs(fine - coarse) > 1e-7 * std::max(1e-300, std::abs(fine))) {
    throw QuadratureNotConverged("P surface quadrature drift " +
                                 std::to_string(std::abs(fine - coarse)));
  }
  return fine;
}

double quadratic_form_Q(int N, const FieldWithGrad& u, const FieldWithGrad& v,
                        const Vec& center, double theta, int i) {
  const int level = N == 3 ? 24 : 10;
  const double coarse = surface_form_Q(N, u, v, center, theta, i, level);
  const double fine = surface_form_Q(N, u, v, center, theta, i, level + 8);
  const double scale = std::max({1e-300, std::abs(fine), std::abs(coarse)});
  if (std::abs(fine - coarse) > 1e-6 * scale && std::abs(fine) > 1e-12) {
    throw QuadratureNotConverged("Q surface quadrature drift " +
                                 std::to_string(std::abs(fine - coarse)));
  }
  return fine;
}

FieldWithGrad green_field(const GreenProvider& provider, const Vec& pole) {
  FieldWithGrad f;
  f.value = [&provider, pole](const Vec& y) { return provider.green(pole, y); };
  // Gradient in the evaluation point = first-argument gradient at swapped
  // arguments, by symmetry of G.
  f.grad = [&provider, pole](const Vec& y) { return provider.grad_x_green(y, pole); };
  return f;
}

}  // namespace bnlab
