#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bnlab/problem.hpp"

namespace bnlab {

// The radial path runs in extended precision: remainder norms decay like
// lambda^{-(N+2)/2} and sit near the double-precision noise floor at the top
// of the sweeps.
using real_t = long double;

// A shot radial profile of  u'' + (N-1)/r u' + u_+^{2*-1} + eps u_+^{q-1} = 0
// with u(0) = M, u'(0) = 0, stored on the accepted integrator grid.
struct RadialProfile {
  int N = 0;
  double q = 0;
  real_t epsilon = 0;
  real_t peak = 0;  // M = u(0)

  std::vector<real_t> r, u, du;

  real_t radius() const { return r.back(); }

  // ODE right-hand side for u'' given (r, u, u'); at r = 0 the symmetric limit.
  real_t second_deriv(real_t rr, real_t uu, real_t dd) const;

  // Quintic Hermite interpolation on the stored grid (value + derivatives at
  // both interval ends, second derivatives supplied by the equation).
  real_t value(real_t rr) const;
  real_t deriv(real_t rr) const;

  // Composite Gauss quadrature of f(r, u(r), u'(r)) over [0, b] on the grid.
  real_t integrate_grid(const std::function<real_t(real_t, real_t, real_t)>& f,
                        real_t b) const;

  // Invariants of an accepted solution profile: u(0) = M, u'(0) = 0, positive
  // and decreasing on [0, radius), u(radius) = 0 within tolerance.
  void validate_accepted(real_t boundary_tol = 1e-9L) const;

 private:
  std::size_t interval_of(real_t rr) const;
};

struct ShotResult {
  std::optional<real_t> first_zero;
  RadialProfile profile;  // up to the first zero, or the truncation radius
};

struct ShootOptions {
  real_t rel_tol = 1e-13L;
  real_t abs_tol_factor = 1e-20L;  // x peak height
  real_t r_max = 10.0L;
  real_t max_step = 5e-3L;
  long max_steps = 4000000;
};

ShotResult integrate_ivp(const ProblemParams& params, real_t M,
                         const ShootOptions& options = {});

struct HeightSolve {
  real_t epsilon = 0;
  RadialProfile profile;
  int iterations = 0;
  real_t initializer = 0;  // asymptotic first guess for eps
};

// Find eps such that the shot from height M first vanishes at r = 1 (the unit
// ball), by bracketing plus a safeguarded secant; the initial guess comes from
// the single-peak height balance. epsilon_clamp caps every trial value (a zero
// clamp probes the unperturbed critical equation).
HeightSolve epsilon_for_height(int N, double q, real_t M, const ShootOptions& options = {},
                               std::optional<real_t> epsilon_clamp = std::nullopt);

// Fixed eps, solve for the peak height with first zero at r = 1.
RadialProfile solve_on_ball(const ProblemParams& params, const ShootOptions& options = {});

// One sweep entry: a solved profile for a prescribed peak height.
struct SweepPoint {
  real_t M = 0;
  real_t epsilon = 0;
  bool accepted = false;
  std::string note;
  RadialProfile profile;
};

std::vector<SweepPoint> sweep_heights(int N, double q, const std::vector<real_t>& peaks,
                                      const ShootOptions& options = {}, int threads = 1);

}  // namespace bnlab
