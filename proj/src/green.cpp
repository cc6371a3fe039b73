#include "bnlab/green.hpp"

#include <cmath>

namespace bnlab {

namespace {

double pair_distance(const Vec& x, const Vec& y) {
  const double d = (x - y).norm();
  if (d < 1e-14) {
    throw CoincidentPoints("|x-y| = " + std::to_string(d) + " below 1e-14");
  }
  return d;
}

}  // namespace

double singular_s(int N, const Vec& x, const Vec& y) {
  const double d = pair_distance(x, y);
  return 1.0 / ((N - 2) * unit_sphere_area(N) * std::pow(d, N - 2));
}

Vec grad_x_singular_s(int N, const Vec& x, const Vec& y) {
  const double d = pair_distance(x, y);
  const double kappa = 1.0 / ((N - 2) * unit_sphere_area(N));
  return (2.0 - N) * kappa * std::pow(d, -N) * (x - y);
}

Mat hess_x_singular_s(int N, const Vec& x, const Vec& y) {
  const double d = pair_distance(x, y);
  const double kappa = 1.0 / ((N - 2) * unit_sphere_area(N));
  const Vec r = x - y;
  Mat h = Mat::Identity(N, N) * std::pow(d, -N);
  h -= N * std::pow(d, -N - 2) * (r * r.transpose());
  return (2.0 - N) * kappa * h;
}

Mat cross_singular_s(int N, const Vec& x, const Vec& y) {
  return -hess_x_singular_s(N, x, y);
}

GreenProvider::GreenProvider(DomainSpec domain)
    : domain_(std::move(domain)), dim_(domain_.dim()) {}

void GreenProvider::require_interior(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw OutsideDomain("point dimension mismatch");
  }
  if (!domain_.inside(x)) throw OutsideDomain("point is not interior");
}

double GreenProvider::green(const Vec& x, const Vec& y) const {
  require_interior(x);
  require_interior(y);
  return singular_s(dim_, x, y) - regular_part_impl(x, y);
}

double GreenProvider::regular_part(const Vec& x, const Vec& y) const {
  require_interior(x);
  require_interior(y);
  return regular_part_impl(x, y);
}

double GreenProvider::robin(const Vec& x) const {
  require_interior(x);
  return regular_part_impl(x, x);
}

Vec GreenProvider::grad_x_green(const Vec& x, const Vec& y) const {
  require_interior(x);
  require_interior(y);
  return grad_x_singular_s(dim_, x, y) - grad_x_regular(x, y);
}

Mat GreenProvider::cross_derivs_green(const Vec& x, const Vec& y) const {
  require_interior(x);
  require_interior(y);
  return cross_singular_s(dim_, x, y) - cross_regular(x, y);
}

Mat GreenProvider::hess_x_green(const Vec& x, const Vec& y) const {
  require_interior(x);
  require_interior(y);
  return hess_x_singular_s(dim_, x, y) - hess_x_regular(x, y);
}

// ---------------------------------------------------------------------------
// BallGreen
// ---------------------------------------------------------------------------

namespace {

// t(x,y) = |x'|^2 |y'|^2 - 2 x'.y' + 1 in ball-normalized coordinates; the
// image-charge regular part is kappa a^{2-N} t^{(2-N)/2}, smooth for interior
// arguments including x = center.
struct BallFrame {
  Vec xs, ys;
  double t;
  double a;
};

BallFrame ball_frame(const DomainSpec& dom, const Vec& x, const Vec& y) {
  BallFrame f;
  f.a = dom.radius;
  f.xs = (x - dom.center) / f.a;
  f.ys = (y - dom.center) / f.a;
  f.t = f.xs.squaredNorm() * f.ys.squaredNorm() - 2.0 * f.xs.dot(f.ys) + 1.0;
  return f;
}

}  // namespace

BallGreen::BallGreen(DomainSpec ball) : GreenProvider(std::move(ball)) {
  if (domain_.kind != DomainSpec::Kind::ball) {
    throw ConfigError("BallGreen requires a ball domain");
  }
  kappa_ = 1.0 / ((dim_ - 2) * unit_sphere_area(dim_));

  // Build-time sanity check: H(x,.) must be discretely harmonic and must match
  // S(x,.) on the boundary.
  const double a = domain_.radius;
  Vec probe = domain_.center;
  probe[0] += 0.41 * a;
  const double h = 1e-4 * a;
  Vec y0 = domain_.center;
  y0[1] += 0.23 * a;
  double lap = -2.0 * dim_ * regular_part_impl(probe, y0);
  for (int j = 0; j < dim_; ++j) {
    Vec yp = y0, ym = y0;
    yp[j] += h;
    ym[j] -= h;
    lap += regular_part_impl(probe, yp) + regular_part_impl(probe, ym);
  }
  lap /= h * h;
  const double scale = std::abs(regular_part_impl(probe, y0));
  if (std::abs(lap) > 1e-4 * scale / (a * a)) {
    throw Error("BallGreen: regular part failed the harmonicity check");
  }
  Vec b = domain_.center;
  b[0] += a * (1.0 - 1e-9);
  const double defect = std::abs(regular_part_impl(probe, b) - singular_s(dim_, probe, b));
  if (defect > 1e-6 * singular_s(dim_, probe, b)) {
    throw Error("BallGreen: boundary condition check failed");
  }
}

double BallGreen::regular_part_impl(const Vec& x, const Vec& y) const {
  const auto f = ball_frame(domain_, x, y);
  return kappa_ * std::pow(f.a, 2 - dim_) * std::pow(f.t, 0.5 * (2 - dim_));
}

Vec BallGreen::grad_x_regular(const Vec& x, const Vec& y) const {
  const auto f = ball_frame(domain_, x, y);
  const Vec t_x = (2.0 * f.xs * f.ys.squaredNorm() - 2.0 * f.ys) / f.a;
  return kappa_ * std::pow(f.a, 2 - dim_) * 0.5 * (2 - dim_) *
         std::pow(f.t, -0.5 * dim_) * t_x;
}

Mat BallGreen::hess_x_regular(const Vec& x, const Vec& y) const {
  const auto f = ball_frame(domain_, x, y);
  const Vec t_x = (2.0 * f.xs * f.ys.squaredNorm() - 2.0 * f.ys) / f.a;
  const Mat t_xx = (2.0 * f.ys.squaredNorm() / (f.a * f.a)) * Mat::Identity(dim_, dim_);
  const double c = kappa_ * std::pow(f.a, 2 - dim_) * 0.5 * (2 - dim_);
  return c * (-0.5 * dim_ * std::pow(f.t, -0.5 * dim_ - 1) * (t_x * t_x.transpose()) +
              std::pow(f.t, -0.5 * dim_) * t_xx);
}

Mat BallGreen::cross_regular(const Vec& x, const Vec& y) const {
  const auto f = ball_frame(domain_, x, y);
  const Vec t_x = (2.0 * f.xs * f.ys.squaredNorm() - 2.0 * f.ys) / f.a;
  const Vec t_y = (2.0 * f.ys * f.xs.squaredNorm() - 2.0 * f.xs) / f.a;
  const Mat t_xy =
      (4.0 * f.xs * f.ys.transpose() - 2.0 * Mat::Identity(dim_, dim_)) / (f.a * f.a);
  const double c = kappa_ * std::pow(f.a, 2 - dim_) * 0.5 * (2 - dim_);
  return c * (-0.5 * dim_ * std::pow(f.t, -0.5 * dim_ - 1) * (t_x * t_y.transpose()) +
              std::pow(f.t, -0.5 * dim_) * t_xy);
}

Vec BallGreen::grad_robin(const Vec& x) const {
  require_interior(x);
  const double a = domain_.radius;
  const Vec xs = (x - domain_.center) / a;
  const double s = 1.0 - xs.squaredNorm();
  return 2.0 * (dim_ - 2) * kappa_ * std::pow(a, 1 - dim_) * std::pow(s, 1 - dim_) * xs;
}

Mat BallGreen::hess_robin(const Vec& x) const {
  require_interior(x);
  const double a = domain_.radius;
  const Vec xs = (x - domain_.center) / a;
  const double s = 1.0 - xs.squaredNorm();
  const double c = 2.0 * (dim_ - 2) * kappa_ * std::pow(a, -dim_);
  return c * (std::pow(s, 1 - dim_) * Mat::Identity(dim_, dim_) +
              2.0 * (dim_ - 1) * std::pow(s, -dim_) * (xs * xs.transpose()));
}

// ---------------------------------------------------------------------------
// Harmonic extension on the ball (shared MFS machinery)
// ---------------------------------------------------------------------------

namespace {

int ball_collocation_level(int N) {
  switch (N) {
    case 3: return 22;
    case 4: return 11;
    case 5: return 7;
    default: return 5;
  }
}

}  // namespace

struct BallGreen::Mfs {
  std::vector<Vec> boundary;
  std::vector<Vec> sources;
  Eigen::BDCSVD<Mat> svd;
  int dim;

  Mfs(const DomainSpec& dom) {
    dim = dom.dim();
    const int level = ball_collocation_level(dim);
    boundary = sphere_rule(dim, dom.center, dom.radius, level).points;
    // Sources on a concentric sphere, outside the domain but inside the
    // continuation barrier of the traces we fit (bubble centers well interior).
    sources = sphere_rule(dim, dom.center, 1.35 * dom.radius, std::max(level / 2, 3)).points;
    Mat A(boundary.size(), sources.size());
    for (std::size_t p = 0; p < boundary.size(); ++p) {
      for (std::size_t k = 0; k < sources.size(); ++k) {
        A(p, k) = singular_s(dim, sources[k], boundary[p]);
      }
    }
    svd.compute(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  }
};

const BallGreen::Mfs& BallGreen::mfs() const {
  std::call_once(mfs_once_, [this] { mfs_ = std::make_shared<Mfs>(domain_); });
  return *mfs_;
}

HarmonicFn BallGreen::harmonic_extension(const std::function<double(const Vec&)>& g) const {
  const Mfs& m = mfs();
  Eigen::VectorXd rhs(m.boundary.size());
  for (std::size_t p = 0; p < m.boundary.size(); ++p) rhs[p] = g(m.boundary[p]);
  Eigen::VectorXd w = m.svd.solve(rhs);
  const int N = dim_;
  auto sources = m.sources;  // shared copy keeps the evaluator self-contained
  return [N, sources, w](const Vec& y) {
    double v = 0;
    for (std::size_t k = 0; k < sources.size(); ++k) v += w[k] * singular_s(N, sources[k], y);
    return v;
  };
}

// ---------------------------------------------------------------------------
// MfsGreen
// ---------------------------------------------------------------------------

MfsGreen::MfsGreen(DomainSpec domain, MfsOptions options)
    : GreenProvider(std::move(domain)), options_(options) {
  if (domain_.kind != DomainSpec::Kind::generic) {
    throw ConfigError("MfsGreen requires a generic domain");
  }
  domain_.validate(options_.min_boundary_points);
  const auto& pts = domain_.boundary_points;
  const auto& nrm = domain_.outward_normals;
  const std::size_t P = pts.size();
  fd_step_ = options_.fd_step_factor * domain_.diameter();
  fd_hess_step_ = options_.fd_hess_step_factor * domain_.diameter();

  const double offset = options_.source_offset_factor * domain_.diameter();
  for (std::size_t i = 0; i < P; i += options_.source_stride) {
    sources_.push_back(pts[i] + offset * nrm[i]);
  }

  Mat A(P, sources_.size());
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t k = 0; k < sources_.size(); ++k) {
      A(p, k) = singular_s(dim_, sources_[k], pts[p]);
    }
  }
  svd_.compute(A, Eigen::ComputeThinU | Eigen::ComputeThinV);

  // Validation: fit the regular part for probes in the interior core and
  // record the worst boundary defect.
  Vec centroid = Vec::Zero(dim_);
  for (const auto& b : pts) centroid += b;
  centroid /= static_cast<double>(P);
  std::vector<Vec> probes = {centroid};
  for (int j = 0; j < dim_; ++j) {
    Vec p = centroid;
    p[j] += 0.45 * domain_.boundary_distance(centroid);
    probes.push_back(p);
  }
  double worst = 0;
  for (const auto& x : probes) {
    const Eigen::VectorXd w = solve_weights(x);
    for (std::size_t p = 0; p < P; ++p) {
      double h = 0;
      for (std::size_t k = 0; k < sources_.size(); ++k) {
        h += w[k] * singular_s(dim_, sources_[k], pts[p]);
      }
      worst = std::max(worst, std::abs(h - singular_s(dim_, x, pts[p])));
    }
  }
  validation_residual_ = worst;
  if (worst > options_.validation_tol) {
    throw ProviderNotBuilt("boundary residual " + std::to_string(worst) +
                           " exceeds tolerance " + std::to_string(options_.validation_tol));
  }
}

Eigen::VectorXd MfsGreen::solve_weights_data(const Eigen::VectorXd& boundary_values) const {
  return svd_.solve(boundary_values);
}

Eigen::VectorXd MfsGreen::solve_weights(const Vec& x) const {
  const auto& pts = domain_.boundary_points;
  Eigen::VectorXd rhs(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) rhs[p] = singular_s(dim_, x, pts[p]);
  return solve_weights_data(rhs);
}

double MfsGreen::regular_part_impl(const Vec& x, const Vec& y) const {
  const Eigen::VectorXd w = solve_weights(x);
  double v = 0;
  for (std::size_t k = 0; k < sources_.size(); ++k) {
    v += w[k] * singular_s(dim_, sources_[k], y);
  }
  return v;
}

Vec MfsGreen::grad_x_regular(const Vec& x, const Vec& y) const {
  Vec g(dim_);
  for (int i = 0; i < dim_; ++i) {
    Vec xp = x, xm = x;
    xp[i] += fd_step_;
    xm[i] -= fd_step_;
    g[i] = (regular_part_impl(xp, y) - regular_part_impl(xm, y)) / (2 * fd_step_);
  }
  return g;
}

Mat MfsGreen::cross_regular(const Vec& x, const Vec& y) const {
  // d/dx_i of the analytic y-gradient of the fitted source expansion.
  Mat c(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    Vec xp = x, xm = x;
    xp[i] += fd_step_;
    xm[i] -= fd_step_;
    const Eigen::VectorXd wp = solve_weights(xp);
    const Eigen::VectorXd wm = solve_weights(xm);
    Vec gyp = Vec::Zero(dim_), gym = Vec::Zero(dim_);
    for (std::size_t k = 0; k < sources_.size(); ++k) {
      const Vec gy = grad_x_singular_s(dim_, y, sources_[k]);
      gyp += wp[k] * gy;
      gym += wm[k] * gy;
    }
    c.row(i) = ((gyp - gym) / (2 * fd_step_)).transpose();
  }
  return c;
}

Mat MfsGreen::hess_x_regular(const Vec& x, const Vec& y) const {
  const double h = fd_hess_step_;
  Mat out(dim_, dim_);
  const double center = regular_part_impl(x, y);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      double v;
      if (i == j) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        v = (regular_part_impl(xp, y) - 2 * center + regular_part_impl(xm, y)) / (h * h);
      } else {
        Vec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        v = (regular_part_impl(xpp, y) - regular_part_impl(xpm, y) -
             regular_part_impl(xmp, y) + regular_part_impl(xmm, y)) / (4 * h * h);
      }
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Vec MfsGreen::grad_robin(const Vec& x) const {
  require_interior(x);
  Vec g(dim_);
  for (int i = 0; i < dim_; ++i) {
    Vec xp = x, xm = x;
    xp[i] += fd_step_;
    xm[i] -= fd_step_;
    g[i] = (regular_part_impl(xp, xp) - regular_part_impl(xm, xm)) / (2 * fd_step_);
  }
  return g;
}

Mat MfsGreen::hess_robin(const Vec& x) const {
  require_interior(x);
  const double h = fd_hess_step_;
  auto R = [this](const Vec& p) { return regular_part_impl(p, p); };
  Mat out(dim_, dim_);
  const double center = R(x);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      double v;
      if (i == j) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        v = (R(xp) - 2 * center + R(xm)) / (h * h);
      } else {
        Vec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        v = (R(xpp) - R(xpm) - R(xmp) + R(xmm)) / (4 * h * h);
      }
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

HarmonicFn MfsGreen::harmonic_extension(const std::function<double(const Vec&)>& g) const {
  const auto& pts = domain_.boundary_points;
  Eigen::VectorXd rhs(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) rhs[p] = g(pts[p]);
  Eigen::VectorXd w = solve_weights_data(rhs);
  const int N = dim_;
  auto sources = sources_;
  return [N, sources, w](const Vec& y) {
    double v = 0;
    for (std::size_t k = 0; k < sources.size(); ++k) v += w[k] * singular_s(N, sources[k], y);
    return v;
  };
}

DomainSpec ball_as_generic(const Vec& center, double radius, int level) {
  const auto rule = sphere_rule(static_cast<int>(center.size()), center, radius, level);
  std::vector<Vec> normals;
  normals.reserve(rule.points.size());
  for (const auto& p : rule.points) normals.push_back((p - center).normalized());
  return DomainSpec::make_generic(rule.points, normals);
}

}  // namespace bnlab
