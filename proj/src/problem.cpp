#include "bnlab/problem.hpp"

#include <cmath>
#include <string>

#include "bnlab/numerics.hpp"

namespace bnlab {

ProblemParams::ProblemParams(int N_, double q_, double epsilon_)
    : N(N_), q(q_), epsilon(epsilon_) {
  if (N < 3) throw ConfigError("dimension N must be >= 3, got " + std::to_string(N));
  if (!(q > 2.0) || !(q < two_star())) {
    throw ConfigError("q must lie in (2, 2*) = (2, " + std::to_string(two_star()) + ")");
  }
  if (epsilon < 0) throw ConfigError("epsilon must be >= 0");
}

double ProblemParams::alpha_N() const {
  return std::pow(static_cast<double>(N) * (N - 2), 0.25 * (N - 2));
}

double ProblemParams::beta_N() const {
  return std::pow(alpha_N(), -2.0 / (N - 2));
}

void ProblemParams::require_reduced_range() const {
  const double lo = std::max(2.0, static_cast<double>(N) / (N - 2));
  if (!(q > lo)) {
    throw ExponentOutOfRange("reduced energy needs q > max{2, N/(N-2)} = " +
                             std::to_string(lo) + ", got q = " + std::to_string(q));
  }
}

void ProblemParams::require_rate_range() const {
  const double lo = std::max(2.0, 4.0 / (N - 2));
  if (!(q > lo)) {
    throw ExponentOutOfRange("rate laws need q > max{2, 4/(N-2)} = " +
                             std::to_string(lo) + ", got q = " + std::to_string(q));
  }
}

double constant_A(int N) {
  const double alpha = std::pow(static_cast<double>(N) * (N - 2), 0.25 * (N - 2));
  return std::pow(alpha, (N + 2.0) / (N - 2.0)) * unit_sphere_area(N) / N;
}

Constants constants(const ProblemParams& params) {
  const int N = params.N;
  const double q = params.q;
  const double gamma_arg = 0.5 * (N - 2) * q - 0.5 * N;
  if (!(gamma_arg > 0)) {
    throw ExponentOutOfRange("B requires (N-2)q/2 - N/2 > 0, got " +
                             std::to_string(gamma_arg));
  }
  const double omega = unit_sphere_area(N);
  const double alpha = params.alpha_N();
  Constants c;
  c.A = std::pow(alpha, params.two_star() - 1.0) * omega / N;
  c.B = std::pow(alpha, q) * omega * std::tgamma(0.5 * N) * std::tgamma(gamma_arg) /
        (2.0 * std::tgamma(0.5 * (N - 2) * q));
  return c;
}

}  // namespace bnlab
