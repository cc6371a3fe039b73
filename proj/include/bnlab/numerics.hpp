#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "bnlab/errors.hpp"

namespace bnlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Surface measure of the unit sphere S^{N-1}, 2 pi^{N/2} / Gamma(N/2).
double unit_sphere_area(int N);

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Adaptive Gauss-Kronrod integration on [a,b] (b may be infinite).
// Throws QuadratureNotConverged if the error estimate exceeds tol * |result|.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, int max_depth = 15);

// Quadrature rule for the surface of the sphere |y - center| = radius in R^N.
// Product construction: Gauss-Legendre in each polar angle, uniform in the
// azimuthal one. Weights sum to unit_sphere_area(N) * radius^{N-1}.
struct SphereRule {
  std::vector<Vec> points;
  std::vector<double> weights;
};
SphereRule sphere_rule(int N, const Vec& center, double radius, int level);

// Deterministic, well-spread unit direction set for angular averaging.
std::vector<Vec> sphere_directions(int N, int count);

// Halton low-discrepancy sequence in [0,1)^dim (skips the first point).
std::vector<Vec> halton_points(int dim, int count);

// Least-squares fit of log y = exponent * log x + log constant over the last
// k points (k = 0 means all points). Inputs must be positive.
struct LogLogFit {
  double exponent = 0;
  double constant = 0;
  double r_squared = 0;
  int points_used = 0;
};
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                     int last_k = 0);

}  // namespace bnlab
