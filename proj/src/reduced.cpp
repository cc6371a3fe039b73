#include "bnlab/reduced.hpp"

#include <cmath>
#include <sstream>

namespace bnlab {

void Config::validate(const DomainSpec& domain) const {
  if (points.empty() || points.size() != heights.size()) {
    throw ConfigError("config needs matching non-empty point and height lists");
  }
  for (const auto& x : points) {
    if (!domain.inside(x)) throw OutsideDomain("config point is not interior");
  }
  for (double h : heights) {
    if (!(h > 0)) throw ConfigError("heights must be positive");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if ((points[i] - points[j]).norm() < 1e-8) {
        throw ConfigError("config points closer than 1e-8");
      }
    }
  }
}

Mat interaction_matrix(const GreenProvider& provider, const std::vector<Vec>& points) {
  const int n = static_cast<int>(points.size());
  Mat M(n, n);
  for (int i = 0; i < n; ++i) {
    M(i, i) = provider.robin(points[i]);
    for (int j = i + 1; j < n; ++j) {
      const double g = 0.5 * (provider.green(points[i], points[j]) +
                              provider.green(points[j], points[i]));
      M(i, j) = -g;
      M(j, i) = -g;
    }
  }
  return M;
}

SpectralData lowest_eigenpair(const Mat& M) {
  if (M.rows() != M.cols()) throw Error("lowest_eigenpair: matrix must be square");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + M.cwiseAbs().maxCoeff())) {
    throw Error("lowest_eigenpair: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  if (es.info() != Eigen::Success) throw Error("lowest_eigenpair: eigensolver failed");
  SpectralData out;
  out.rho = es.eigenvalues()[0];
  out.gap = M.rows() > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0] :
            std::numeric_limits<double>::infinity();
  if (M.rows() > 1 && out.gap < 1e-10) {
    throw NonSimpleLowest("spectral gap " + std::to_string(out.gap) + " below 1e-10");
  }
  Eigen::VectorXd v = es.eigenvectors().col(0);
  if (std::abs(v[0]) < 1e-14) {
    throw NonSimpleLowest("leading component of the lowest eigenvector vanishes");
  }
  out.Lambda = v / v[0];
  out.positive_definite = es.eigenvalues()[0] > 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
  return out;
}

namespace {

struct PhiWork {
  int n = 0;
  int N = 0;
  double A2 = 0;       // A^2
  double B = 0;
  double q = 0;
  double two_star = 0;
  double s = 0;        // (N-2)(2*-q)/2, exponent of the height term
  Mat M;               // interaction matrix
  Eigen::VectorXd mu;  // lambda_j^{(N-2)/2}
};

PhiWork phi_work(const GreenProvider& provider, const ProblemParams& params,
                 const Config& config) {
  params.require_reduced_range();
  config.validate(provider.domain());
  PhiWork w;
  w.n = config.n();
  w.N = params.N;
  const Constants c = constants(params);
  w.A2 = c.A * c.A;
  w.B = c.B;
  w.q = params.q;
  w.two_star = params.two_star();
  w.s = 0.5 * (params.N - 2) * (w.two_star - params.q);
  w.M = interaction_matrix(provider, config.points);
  w.mu.resize(w.n);
  for (int j = 0; j < w.n; ++j) w.mu[j] = std::pow(config.heights[j], 0.5 * (params.N - 2));
  return w;
}

}  // namespace

double phi(const GreenProvider& provider, const ProblemParams& params, const Config& config) {
  const PhiWork w = phi_work(provider, params, config);
  double heights_term = 0;
  for (int j = 0; j < w.n; ++j) heights_term += std::pow(config.heights[j], w.s);
  return 0.5 * w.A2 * w.mu.dot(w.M * w.mu) - (w.B / w.q) * heights_term;
}

Eigen::VectorXd PhiGradient::flat() const {
  const int n = static_cast<int>(x.rows());
  const int N = static_cast<int>(x.cols());
  Eigen::VectorXd out(n * N + n);
  for (int i = 0; i < n; ++i) out.segment(i * N, N) = x.row(i).transpose();
  out.tail(n) = lambda;
  return out;
}

PhiGradient grad_phi(const GreenProvider& provider, const ProblemParams& params,
                     const Config& config) {
  const PhiWork w = phi_work(provider, params, config);
  PhiGradient g;
  g.x = Mat::Zero(w.n, w.N);
  g.lambda = Eigen::VectorXd::Zero(w.n);
  for (int i = 0; i < w.n; ++i) {
    Vec xg = w.mu[i] * w.mu[i] * provider.grad_robin(config.points[i]);
    double lam_paren = w.mu[i] * w.mu[i] * w.M(i, i);
    for (int l = 0; l < w.n; ++l) {
      if (l == i) continue;
      xg -= 2.0 * w.mu[i] * w.mu[l] *
            provider.grad_x_green(config.points[i], config.points[l]);
      lam_paren -= w.mu[i] * w.mu[l] *
                   provider.green(config.points[i], config.points[l]);
    }
    g.x.row(i) = (0.5 * w.A2 * xg).transpose();
    const double lam = config.heights[i];
    g.lambda[i] = 0.5 * (w.N - 2) * w.A2 / lam * lam_paren -
                  0.5 * (w.N - 2) * (w.two_star - w.q) * w.B / (w.q * lam) *
                      std::pow(lam, w.s);
  }
  return g;
}

Mat hessian_phi(const GreenProvider& provider, const ProblemParams& params,
                const Config& config) {
  const PhiWork w = phi_work(provider, params, config);
  const int n = w.n, N = w.N;
  const int dim = n * N + n;
  Mat H = Mat::Zero(dim, dim);
  const auto& xs = config.points;
  const auto& lam = config.heights;

  // x-x blocks.
  for (int i = 0; i < n; ++i) {
    Mat diag_block = w.mu[i] * w.mu[i] * provider.hess_robin(xs[i]);
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      diag_block -= 2.0 * w.mu[i] * w.mu[l] * provider.hess_x_green(xs[i], xs[l]);
    }
    H.block(i * N, i * N, N, N) = 0.5 * w.A2 * diag_block;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const Mat cross = provider.cross_derivs_green(xs[i], xs[k]);
      H.block(i * N, k * N, N, N) = -w.A2 * w.mu[i] * w.mu[k] * cross;
    }
  }

  // lambda-x blocks.
  for (int i = 0; i < n; ++i) {
    const double pref = 0.5 * (N - 2) * w.A2 * std::pow(lam[i], 0.5 * (N - 4));
    Vec same = w.mu[i] * provider.grad_robin(xs[i]);
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      same -= w.mu[l] * provider.grad_x_green(xs[i], xs[l]);
    }
    H.block(n * N + i, i * N, 1, N) = (pref * same).transpose();
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      // Derivative of G(x_i, x_k) in its second argument = first-argument
      // derivative at swapped arguments, by symmetry of G.
      const Vec dsecond = provider.grad_x_green(xs[k], xs[i]);
      H.block(n * N + i, k * N, 1, N) = (-pref * w.mu[k] * dsecond).transpose();
    }
  }
  H.block(0, n * N, n * N, n) = H.block(n * N, 0, n, n * N).transpose();

  // lambda-lambda block, by direct differentiation of the height gradient.
  for (int i = 0; i < n; ++i) {
    double offsum = 0;
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      offsum += w.mu[l] * provider.green(xs[i], xs[l]);
    }
    const double c1 = 0.5 * (N - 2) * w.A2;
    H(n * N + i, n * N + i) =
        c1 * ((N - 3) * std::pow(lam[i], N - 4) * w.M(i, i) -
              0.5 * (N - 4) * std::pow(lam[i], 0.5 * (N - 6)) * offsum) -
        0.5 * (N - 2) * (w.two_star - w.q) * w.B / w.q * (w.s - 1.0) *
            std::pow(lam[i], w.s - 2.0);
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      H(n * N + i, n * N + k) = -0.25 * (N - 2) * (N - 2) * w.A2 *
                                std::pow(lam[i] * lam[k], 0.5 * (N - 4)) *
                                provider.green(xs[i], xs[k]);
    }
  }

  // Enforce exact symmetry against quadrature-level asymmetries.
  H = 0.5 * (H + H.transpose()).eval();
  return H;
}

namespace {

Config config_from_flat(const Eigen::VectorXd& z, int n, int N) {
  Config c;
  c.points.resize(n);
  c.heights.resize(n);
  for (int i = 0; i < n; ++i) c.points[i] = z.segment(i * N, N);
  for (int i = 0; i < n; ++i) c.heights[i] = z[n * N + i];
  return c;
}

void check_feasible(const DomainSpec& domain, const Config& c, const NewtonOptions& opt) {
  const double margin = opt.boundary_margin_factor * domain.diameter();
  for (const auto& x : c.points) {
    if (!domain.inside(x, margin)) throw LeftDomain("iterate left the domain");
  }
  for (double h : c.heights) {
    if (!(h > 0)) throw LeftDomain("iterate lost height positivity");
  }
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    for (std::size_t j = i + 1; j < c.points.size(); ++j) {
      if ((c.points[i] - c.points[j]).norm() < opt.pairwise_floor) {
        throw LeftDomain("iterate collapsed a point pair");
      }
    }
  }
}

std::string trace_string(const std::vector<double>& trace) {
  std::ostringstream os;
  os << "gradient trace:";
  for (double g : trace) os << " " << g;
  return os.str();
}

}  // namespace

CriticalPoint find_critical(const GreenProvider& provider, const ProblemParams& params,
                            const std::vector<Vec>& x0, const std::vector<double>& lambda0,
                            const NewtonOptions& opt) {
  const int n = static_cast<int>(x0.size());
  const int N = params.N;
  Config current;
  current.points = x0;
  current.heights = lambda0;
  current.validate(provider.domain());
  check_feasible(provider.domain(), current, opt);

  Eigen::VectorXd z(n * N + n);
  for (int i = 0; i < n; ++i) z.segment(i * N, N) = x0[i];
  for (int i = 0; i < n; ++i) z[n * N + i] = lambda0[i];

  std::vector<double> trace;
  double gnorm = grad_phi(provider, params, current).flat().norm();
  trace.push_back(gnorm);

  int iter = 0;
  for (; iter < opt.max_iterations && gnorm > opt.grad_tol; ++iter) {
    const Eigen::VectorXd g = grad_phi(provider, params, current).flat();
    const Mat H = hessian_phi(provider, params, current);
    Eigen::VectorXd step = H.fullPivLu().solve(-g);
    if (!step.allFinite()) {
      throw NoConvergence("Newton step is not finite; " + trace_string(trace));
    }

    // Backtracking on the gradient norm; leaving the feasible set aborts.
    double t = 1.0;
    bool accepted = false;
    while (t >= opt.step_floor) {
      const Eigen::VectorXd zt = z + t * step;
      Config cand = config_from_flat(zt, n, N);
      check_feasible(provider.domain(), cand, opt);
      const double gt = grad_phi(provider, params, cand).flat().norm();
      if (gt < gnorm) {
        z = zt;
        current = std::move(cand);
        gnorm = gt;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    trace.push_back(gnorm);
    if (!accepted) {
      throw NoConvergence("backtracking hit the step floor; " + trace_string(trace));
    }
  }
  if (gnorm > opt.grad_tol) {
    throw NoConvergence("no convergence in " + std::to_string(opt.max_iterations) +
                        " iterations; " + trace_string(trace));
  }

  CriticalPoint out;
  out.config = current;
  out.grad_norm = gnorm;
  out.iterations = iter;
  out.grad_trace = trace;
  Eigen::SelfAdjointEigenSolver<Mat> es(hessian_phi(provider, params, current));
  out.hessian_eigenvalues = es.eigenvalues();
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  const double min_abs = es.eigenvalues().cwiseAbs().minCoeff();
  out.nondegenerate = min_abs > 1e-8 * radius;
  return out;
}

std::vector<double> unique_lambda(const GreenProvider& provider, const ProblemParams& params,
                                  const std::vector<Vec>& points,
                                  const std::optional<std::vector<double>>& start) {
  params.require_reduced_range();
  if (!(params.q >= params.two_star() - 1.0)) {
    throw ExponentOutOfRange("unique heights need q >= 2* - 1 = " +
                             std::to_string(params.two_star() - 1.0));
  }
  const int n = static_cast<int>(points.size());
  const Mat M = interaction_matrix(provider, points);
  const SpectralData spec = lowest_eigenpair(M);
  if (!spec.positive_definite) {
    throw NotPositiveDefinite("interaction matrix has lowest eigenvalue " +
                              std::to_string(spec.rho));
  }
  const Constants c = constants(params);
  const double A2 = c.A * c.A;
  const double p = params.two_star() - params.q;  // in (0, 1] here

  // Newton on grad Psi with positivity backtracking; Psi is strictly convex.
  Eigen::VectorXd t(n);
  if (start) {
    if (static_cast<int>(start->size()) != n) {
      throw ConfigError("unique_lambda start size mismatch");
    }
    for (int i = 0; i < n; ++i) {
      if (!((*start)[i] > 0)) throw ConfigError("unique_lambda start must be positive");
      t[i] = std::pow((*start)[i], 0.5 * (params.N - 2));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      t[i] = std::pow(p * c.B / (params.q * A2 * M(i, i)), 1.0 / (2.0 - p));
    }
  }
  auto psi_value = [&](const Eigen::VectorXd& v) {
    double heights = 0;
    for (int i = 0; i < n; ++i) heights += std::pow(v[i], p);
    return 0.5 * A2 * v.dot(M * v) - c.B / params.q * heights;
  };
  for (int iter = 0;; ++iter) {
    if (iter == 200) throw NoConvergence("height minimization stalled");
    Eigen::VectorXd tp(n), tpp(n);
    for (int i = 0; i < n; ++i) {
      tp[i] = std::pow(t[i], p - 1.0);
      tpp[i] = (p - 1.0) * std::pow(t[i], p - 2.0);
    }
    const Eigen::VectorXd grad = A2 * (M * t) - (p * c.B / params.q) * tp;
    if (grad.norm() <= 1e-13 * std::max(1.0, A2 * t.norm() * M.norm())) break;
    Mat H = A2 * M;
    for (int i = 0; i < n; ++i) H(i, i) -= (p * c.B / params.q) * tpp[i];
    Eigen::VectorXd step = H.ldlt().solve(-grad);
    double s = 1.0;
    while (((t + s * step).array() <= 0).any()) s *= 0.5;
    const double base = psi_value(t);
    while (s > 1e-14 && psi_value(t + s * step) > base) s *= 0.5;
    t += s * step;
  }

  std::vector<double> lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = std::pow(t[i], 2.0 / (params.N - 2));

  // The returned heights must be stationary for the reduced energy.
  Config check;
  check.points = points;
  check.heights = lambda;
  const double resid = grad_phi(provider, params, check).lambda.norm();
  if (resid > 1e-10 * std::max(1.0, std::abs(phi(provider, params, check)))) {
    throw NoConvergence("height stationarity residual " + std::to_string(resid));
  }
  return lambda;
}

double single_peak_lambda(const GreenProvider& provider, const ProblemParams& params,
                          const Vec& x) {
  params.require_reduced_range();
  const Constants c = constants(params);
  const double expo = 0.5 * (params.N - 2) * params.q - 2.0;
  const double rhs = (params.two_star() - params.q) * c.B /
                     (params.q * c.A * c.A * provider.robin(x));
  return std::pow(rhs, 1.0 / expo);
}

}  // namespace bnlab
