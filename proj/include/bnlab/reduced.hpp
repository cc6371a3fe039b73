#pragma once

#include <optional>
#include <vector>

#include "bnlab/green.hpp"
#include "bnlab/problem.hpp"

namespace bnlab {

// A candidate concentration pattern: n interior points with positive heights.
struct Config {
  std::vector<Vec> points;
  std::vector<double> heights;

  int n() const { return static_cast<int>(points.size()); }
  void validate(const DomainSpec& domain) const;
};

// Symmetric matrix with Robin values on the diagonal and minus Green values
// off the diagonal; off-diagonal pairs are averaged to enforce symmetry.
Mat interaction_matrix(const GreenProvider& provider, const std::vector<Vec>& points);

struct SpectralData {
  double rho = 0;           // lowest eigenvalue
  Eigen::VectorXd Lambda;   // eigenvector scaled so that Lambda[0] = 1
  double gap = 0;           // distance to the second eigenvalue
  bool positive_definite = false;
};

// Lowest eigenpair of a symmetric matrix. Throws NonSimpleLowest if the
// spectral gap is below 1e-10.
SpectralData lowest_eigenpair(const Mat& M);

// Reduced energy
//   Phi_n = (A^2/2) <lambda^{(N-2)/2}, M(x) lambda^{(N-2)/2}>
//           - (B/q) sum_j lambda_j^{(N-2)(2*-q)/2}
// together with its closed-form first and second derivatives. Variable order
// in flattened vectors is [x_1 .. x_n (N each), lambda_1 .. lambda_n].
double phi(const GreenProvider& provider, const ProblemParams& params, const Config& config);

struct PhiGradient {
  Mat x;                    // n x N
  Eigen::VectorXd lambda;   // n
  Eigen::VectorXd flat() const;
};
PhiGradient grad_phi(const GreenProvider& provider, const ProblemParams& params,
                     const Config& config);

Mat hessian_phi(const GreenProvider& provider, const ProblemParams& params,
                const Config& config);

struct NewtonOptions {
  double grad_tol = 1e-10;
  int max_iterations = 200;
  double step_floor = 1e-12;
  double pairwise_floor = 1e-8;
  double boundary_margin_factor = 1e-6;  // x domain diameter
};

struct CriticalPoint {
  Config config;
  double grad_norm = 0;
  Eigen::VectorXd hessian_eigenvalues;
  bool nondegenerate = false;
  int iterations = 0;
  std::vector<double> grad_trace;
};

// Damped Newton search for a critical point of Phi_n. Iterates that exit the
// domain, collapse a point pair, or lose height positivity abort with
// LeftDomain; stagnation raises NoConvergence carrying the gradient trace.
CriticalPoint find_critical(const GreenProvider& provider, const ProblemParams& params,
                            const std::vector<Vec>& x0, const std::vector<double>& lambda0,
                            const NewtonOptions& options = {});

// For q >= 2*-1 and M(x) positive definite, the unique critical heights of
// Phi_n(x, .): minimize the strictly convex companion
//   Psi_n(t) = (A^2/2) <t, M t> - (B/q) sum t_j^{2*-q}
// over t in (0,infty)^n, then map back lambda_j = t_j^{2/(N-2)}. The optional
// start overrides the default initial heights (the result cannot depend on it).
std::vector<double> unique_lambda(const GreenProvider& provider, const ProblemParams& params,
                                  const std::vector<Vec>& points,
                                  const std::optional<std::vector<double>>& start = {});

// Closed-form single-peak stationary height: lambda^{(N-2)q/2 - 2} =
// (2*-q) B / (q A^2 R(x)).
double single_peak_lambda(const GreenProvider& provider, const ProblemParams& params,
                          const Vec& x);

}  // namespace bnlab
