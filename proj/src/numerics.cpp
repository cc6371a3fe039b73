#include "bnlab/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace bnlab {

double unit_sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

namespace {

GaussRule make_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double p1 = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0L;
      long double p2 = 0.0L;
      for (int j = 0; j < n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j + 1.0L) * x * p2 - j * p3) / (j + 1.0L);
      }
      dp = n * (x * p1 - p2) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    rule.nodes[i] = static_cast<double>(-x);
    rule.nodes[n - 1 - i] = static_cast<double>(x);
    rule.weights[i] = static_cast<double>(w);
    rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_depth) {
  double err = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &err);
  const double scale = std::max(std::abs(v), 1e-300);
  if (err > 100 * rel_tol * scale && err > 1e-14 * scale) {
    throw QuadratureNotConverged("adaptive Gauss-Kronrod error " + std::to_string(err) +
                                 " for tolerance " + std::to_string(rel_tol));
  }
  return v;
}

namespace {

// Recursive product rule: a point on S^{d-1} is (cos t, sin t * w), w on S^{d-2},
// with surface weight sin^{d-2} t dt. The base circle uses a uniform grid.
void sphere_rule_rec(int d, int level, std::vector<std::vector<double>>& pts,
                     std::vector<double>& wts) {
  if (d == 1) {
    // S^0 = two points, measure 1 each.
    pts = {{1.0}, {-1.0}};
    wts = {1.0, 1.0};
    return;
  }
  if (d == 2) {
    const int m = 2 * level;
    pts.clear();
    wts.clear();
    for (int k = 0; k < m; ++k) {
      const double phi = 2.0 * std::numbers::pi * (k + 0.5) / m;
      pts.push_back({std::cos(phi), std::sin(phi)});
      wts.push_back(2.0 * std::numbers::pi / m);
    }
    return;
  }
  if (d == 3) {
    // Gauss-Legendre in cos t absorbs the sin t surface factor exactly.
    const GaussRule& gl = gauss_legendre(level);
    const int m = 2 * level;
    pts.clear();
    wts.clear();
    for (int i = 0; i < level; ++i) {
      const double u = gl.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int k = 0; k < m; ++k) {
        const double phi = 2.0 * std::numbers::pi * (k + 0.5) / m;
        pts.push_back({u, s * std::cos(phi), s * std::sin(phi)});
        wts.push_back(gl.weights[i] * 2.0 * std::numbers::pi / m);
      }
    }
    return;
  }
  std::vector<std::vector<double>> sub_pts;
  std::vector<double> sub_wts;
  sphere_rule_rec(d - 1, level, sub_pts, sub_wts);
  const GaussRule& gl = gauss_legendre(level);
  pts.clear();
  wts.clear();
  for (int i = 0; i < level; ++i) {
    const double t = 0.5 * std::numbers::pi * (gl.nodes[i] + 1.0);  // t in (0, pi)
    const double wt = 0.5 * std::numbers::pi * gl.weights[i] * std::pow(std::sin(t), d - 2);
    for (std::size_t k = 0; k < sub_pts.size(); ++k) {
      std::vector<double> p(d);
      p[0] = std::cos(t);
      for (int j = 0; j < d - 1; ++j) p[j + 1] = std::sin(t) * sub_pts[k][j];
      pts.push_back(std::move(p));
      wts.push_back(wt * sub_wts[k]);
    }
  }
}

}  // namespace

SphereRule sphere_rule(int N, const Vec& center, double radius, int level) {
  std::vector<std::vector<double>> pts;
  std::vector<double> wts;
  sphere_rule_rec(N, level, pts, wts);
  SphereRule rule;
  rule.points.reserve(pts.size());
  rule.weights.reserve(wts.size());
  const double scale = std::pow(radius, N - 1);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Vec p(N);
    for (int j = 0; j < N; ++j) p[j] = center[j] + radius * pts[k][j];
    rule.points.push_back(std::move(p));
    rule.weights.push_back(wts[k] * scale);
  }
  return rule;
}

namespace {

double halton_value(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

// erf^{-1} via Newton on erf; adequate for mapping quasi-random points.
double inv_norm_cdf(double p) {
  // Acklam-style rational approximation, then one Newton polish step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 0.97575) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1 + 0.5 * x * u);
}

}  // namespace

std::vector<Vec> halton_points(int dim, int count) {
  if (dim > 10) throw Error("halton_points: dimension > 10 unsupported");
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 1; i <= count; ++i) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j) p[j] = halton_value(i, kPrimes[j]);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vec> sphere_directions(int N, int count) {
  const auto cube = halton_points(N, count);
  std::vector<Vec> dirs;
  dirs.reserve(count);
  for (const auto& p : cube) {
    Vec g(N);
    for (int j = 0; j < N; ++j) {
      const double u = std::min(std::max(p[j], 1e-12), 1.0 - 1e-12);
      g[j] = inv_norm_cdf(u);
    }
    const double norm = g.norm();
    dirs.push_back(norm > 1e-12 ? Vec(g / norm) : Vec(Vec::Unit(N, 0)));
  }
  return dirs;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                     int last_k) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InsufficientData("fit_loglog needs >= 2 matched points");
  }
  const int n = static_cast<int>(x.size());
  const int k = (last_k <= 0 || last_k > n) ? n : last_k;
  const int begin = n - k;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = begin; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InsufficientData("fit_loglog needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double det = k * sxx - sx * sx;
  if (std::abs(det) < 1e-30) throw InsufficientData("fit_loglog: degenerate abscissae");
  LogLogFit fit;
  fit.exponent = (k * sxy - sx * sy) / det;
  fit.constant = std::exp((sy - fit.exponent * sx) / k);
  const double ss_tot = syy - sy * sy / k;
  double ss_res = 0;
  for (int i = begin; i < n; ++i) {
    const double pred = std::log(fit.constant) + fit.exponent * std::log(x[i]);
    ss_res += (std::log(y[i]) - pred) * (std::log(y[i]) - pred);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points_used = k;
  return fit;
}

}  // namespace bnlab
