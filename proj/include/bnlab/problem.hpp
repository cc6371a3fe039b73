#pragma once

#include "bnlab/errors.hpp"

namespace bnlab {

// Parameters of -Laplace u = u^{2*-1} + eps u^{q-1} on a bounded domain in
// R^N, with 2* = 2N/(N-2) the critical Sobolev exponent and q subcritical.
struct ProblemParams {
  int N = 0;
  double q = 0;
  double epsilon = 0;

  ProblemParams(int N_, double q_, double epsilon_ = 0.0);

  double two_star() const { return 2.0 * N / (N - 2); }
  // Height normalization of the extremal profile, (N(N-2))^{(N-2)/4}.
  double alpha_N() const;
  // Scale of the unit-height profile, alpha_N^{-2/(N-2)}.
  double beta_N() const;

  // q > max{2, N/(N-2)} -- required for the reduced-energy constant B.
  void require_reduced_range() const;
  // q > max{2, 4/(N-2)} -- required by the blow-up rate laws.
  void require_rate_range() const;
};

// The two reduced-energy constants
//   A = integral of U_{0,1}^{2*-1},  B = integral of U_{0,1}^q  over R^N.
struct Constants {
  double A = 0;
  double B = 0;
};

// Closed forms: A = alpha_N^{2*-1} omega_N / N and
// B = alpha_N^q omega_N Gamma(N/2) Gamma((N-2)q/2 - N/2) / (2 Gamma((N-2)q/2)).
Constants constants(const ProblemParams& params);

// A alone (independent of q).
double constant_A(int N);

}  // namespace bnlab
