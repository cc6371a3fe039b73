#pragma once

#include "bnlab/radial.hpp"
#include "bnlab/reduced.hpp"

namespace bnlab {

// ---------------------------------------------------------------------------
// Bubble extraction and remainder norms
// ---------------------------------------------------------------------------

enum class FitMode { peak, projection };

// lambda is reported in the peak convention u(x_eps)^{2/(N-2)}; the companion
// lambda_bubble = beta_N * lambda is the profile-parameter normalization under
// which the far-field constant equals A and the rate constant equals
// q A^2 R / ((2*-q) B). Projection mode fits lambda_bubble directly by
// minimizing the radial H^1_0 remainder.
struct DecompositionReport {
  Vec x_eps;
  double lambda = 0;
  double lambda_bubble = 0;
  double w_norm_h1 = 0;
  FitMode fit_mode = FitMode::peak;
  std::vector<double> mu;
};

DecompositionReport extract_bubble(const RadialProfile& profile,
                                   FitMode mode = FitMode::peak);

// Sup distance between the rescaled profile lambda^{-(N-2)/2} u(lambda^{-1} y)
// and the standard unit-height bubble over |y| <= y_max (peak normalization).
double rescaled_profile_gap(const RadialProfile& profile, double y_max = 10.0);

// ---------------------------------------------------------------------------
// Sweep-level rate laws
// ---------------------------------------------------------------------------

struct RateFit {
  double exponent = 0;
  double constant = 0;   // fitted prefactor exp(intercept)
  double r_squared = 0;
  int points_used = 0;
};

struct SweepAnalysis {
  std::vector<double> lambda;       // bubble normalization, accepted shots only
  std::vector<double> lambda_peak;
  std::vector<double> epsilon;
  std::vector<double> w_norm;       // projection-mode remainder norms
};

// Collects accepted shots; requires >= 5 spanning two decades in lambda.
SweepAnalysis analyze_sweep(const std::vector<SweepPoint>& sweep);

// log eps against log lambda over the last k points; the exponent tends to
// -((N-2)q/2 - 2) and the prefactor to q A^2 R(0) / ((2*-q) B).
RateFit verify_blowup_rate(const SweepAnalysis& sweep, int last_k = 6);

// log w_norm against log lambda, with the logarithmic factor of the (N, q)
// table row divided out before regression.
RateFit verify_w_decay(const SweepAnalysis& sweep, int N, double q, int last_k = 6);

// Predicted remainder decay: w ~ (ln lambda)^{log_power} * lambda^{exponent}.
struct WDecayLaw {
  double exponent = 0;
  double log_power = 0;
};
WDecayLaw w_decay_law(int N, double q);

// Concentration-speed error scale F_{N,q}(lambda), piecewise in (N, q).
double F_rate(int N, double q, double lambda);

struct ConcentrationReport {
  double lambda_star = 0;          // stationary height of the reduced energy
  std::vector<double> deviation;   // |lambda* - (eps^{2/((N-2)q-4)} lambda)^{-1}|
  std::vector<double> ratio;       // deviation / F_{N,q}(lambda)
  double max_ratio = 0;
  double x_deviation = 0;          // identically zero for radial profiles
};
ConcentrationReport verify_concentration(const SweepAnalysis& sweep,
                                         const GreenProvider& provider,
                                         const ProblemParams& params);

struct SandwichReport {
  double c_upper = 0;  // max of u / U_{0,lambda} on r <= 3/4
  double c_lower = 0;  // min of the same ratio
};
SandwichReport sandwich_check(const RadialProfile& profile);

struct GreenLimitReport {
  std::vector<double> radii;
  std::vector<double> scaled_u;    // lambda^{(N-2)/2} u(r)
  std::vector<double> green_side;  // A * G(0, r e1)
  std::vector<double> rel_gap;
};
GreenLimitReport green_limit_check(const RadialProfile& profile, const GreenProvider& provider,
                                   const std::vector<double>& radii = {0.5, 0.7, 0.9});

// ---------------------------------------------------------------------------
// Pohozaev balances
// ---------------------------------------------------------------------------

struct PohozaevReport {
  double lhs = 0;
  double rhs = 0;
  double relative_residual = 0;
};

// Global identity on the profile's ball (requires a vanishing boundary trace):
//   (1/2N) int_bdry |grad u|^2 <x,nu> = (1/q - 1/2*) eps int u^q.
PohozaevReport pohozaev_global(const RadialProfile& profile);

// Full local identity on B(0, rho), all boundary and volume terms.
PohozaevReport pohozaev_local(const RadialProfile& profile, real_t rho);

// ---------------------------------------------------------------------------
// Quadratic boundary forms
// ---------------------------------------------------------------------------

struct FieldWithGrad {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
};

// Surface forms over the sphere |y - center| = theta:
//   P(u,v) = -theta S[u_nu v_nu] + theta/2 S[<grad u, grad v>]
//            + (2-N)/4 S[u_nu v + v_nu u]
//   Q_i(u,v) = -S[v_nu d_i u] - S[u_nu d_i v] + S[<grad u, grad v> nu_i]
// Both are theta-independent for inputs harmonic off the center.
double quadratic_form_P(int N, const FieldWithGrad& u, const FieldWithGrad& v,
                        const Vec& center, double theta);
double quadratic_form_Q(int N, const FieldWithGrad& u, const FieldWithGrad& v,
                        const Vec& center, double theta, int i);

// Green-function field y -> G(pole, y) with its gradient, as a form input.
FieldWithGrad green_field(const GreenProvider& provider, const Vec& pole);

}  // namespace bnlab
