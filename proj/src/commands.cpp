#include "bnlab/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "bnlab/asympt.hpp"
#include "bnlab/bubbles.hpp"

namespace bnlab {

namespace fs = std::filesystem;

std::unique_ptr<GreenProvider> make_provider(const DomainSpec& domain) {
  if (domain.kind == DomainSpec::Kind::ball) {
    return std::make_unique<BallGreen>(domain);
  }
  return std::make_unique<MfsGreen>(domain);
}

namespace {

ordered_json echo_config(const RunConfig& cfg, const std::string& command) {
  ordered_json j;
  j["command"] = command;
  if (cfg.problem) {
    j["problem"] = {{"N", cfg.problem->N}, {"q", cfg.problem->q},
                    {"epsilon", cfg.problem->epsilon}};
  }
  if (cfg.domain) {
    if (cfg.domain->kind == DomainSpec::Kind::ball) {
      std::vector<double> c(cfg.domain->center.data(),
                            cfg.domain->center.data() + cfg.domain->center.size());
      j["domain"] = {{"kind", "ball"}, {"center", c}, {"radius", cfg.domain->radius}};
    } else {
      j["domain"] = {{"kind", "generic"},
                     {"boundary_points", cfg.domain->boundary_points.size()}};
    }
  }
  j["sweep"] = {{"M_min", cfg.sweep.M_min}, {"M_max", cfg.sweep.M_max},
                {"count", cfg.sweep.count}};
  if (cfg.sweep.epsilon_clamp) j["sweep"]["epsilon_clamp"] = *cfg.sweep.epsilon_clamp;
  j["output_dir"] = cfg.output_dir;
  j["threads"] = cfg.threads;
  return j;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw ConfigError(what);
}

std::vector<real_t> geometric_grid(double lo, double hi, int count) {
  std::vector<real_t> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(static_cast<real_t>(
        lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1))));
  }
  return out;
}

int finish(Manifest& manifest, const std::string& path) {
  manifest.write(path);
  for (const auto& c : manifest.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << "  measured=" << c.measured
              << " tol=" << c.tolerance << "\n";
  }
  return manifest.all_pass() ? 0 : 2;
}

}  // namespace

int cmd_robin(const RunConfig& cfg) {
  require(cfg.domain.has_value(), "robin needs a domain section");
  const auto provider = make_provider(*cfg.domain);
  const int N = provider->dim();
  fs::create_directories(cfg.output_dir);

  Manifest manifest;
  manifest.command = "robin";
  manifest.config_echo = echo_config(cfg, "robin");

  const Vec center = cfg.domain->kind == DomainSpec::Kind::ball
                         ? cfg.domain->center
                         : [&] {
                             Vec c = Vec::Zero(N);
                             for (const auto& b : cfg.domain->boundary_points) c += b;
                             return Vec(c / cfg.domain->boundary_points.size());
                           }();
  const double reach = provider->domain().boundary_distance(center);

  std::ofstream csv(fs::path(cfg.output_dir) / "robin.csv");
  csv << "s,d,robin,grad_norm,boundary_ratio\n";
  const double omega = unit_sphere_area(N);
  const std::vector<double> stations = {0.0,  0.1,  0.2,  0.3,  0.4,  0.5, 0.6,
                                        0.7,  0.8,  0.9,  0.95, 0.98, 0.99};
  double center_grad = 0, ratio_at_001 = 0;
  for (double s : stations) {
    Vec x = center;
    x[0] += s * reach;
    const double R = provider->robin(x);
    const double gnorm = provider->grad_robin(x).norm();
    const double d = provider->domain().boundary_distance(x);
    const double ratio = R * (N - 2) * omega * std::pow(2 * d, N - 2);
    csv << s << ',' << d << ',' << R << ',' << gnorm << ',' << ratio << '\n';
    if (s == 0.0) center_grad = gnorm;
    if (s == 0.99) ratio_at_001 = ratio;
  }

  manifest.checks.push_back({"robin_center_gradient",
                             "grad R vanishes at the ball center",
                             center_grad, 1e-8, center_grad <= 1e-8, ""});
  const double band = cfg.tolerances.get("robin_ratio_rel");
  manifest.checks.push_back({"robin_boundary_ratio",
                             "R(x)(N-2) omega_N (2d)^{N-2} -> 1 near the boundary",
                             ratio_at_001, band, std::abs(ratio_at_001 - 1.0) <= band, ""});
  manifest.notes.push_back("provider_boundary_residual=" +
                           std::to_string(provider->boundary_residual()));
  return finish(manifest, (fs::path(cfg.output_dir) / "robin_manifest.json").string());
}

int cmd_green(const RunConfig& cfg) {
  require(cfg.domain.has_value(), "green needs a domain section");
  const auto provider = make_provider(*cfg.domain);
  const int N = provider->dim();
  fs::create_directories(cfg.output_dir);

  Manifest manifest;
  manifest.command = "green";
  manifest.config_echo = echo_config(cfg, "green");

  const Vec center = cfg.domain->kind == DomainSpec::Kind::ball ? cfg.domain->center
                                                                : Vec(Vec::Zero(N));
  const double reach = provider->domain().boundary_distance(center);
  const auto cube = halton_points(2 * N, 40);

  std::ofstream csv(fs::path(cfg.output_dir) / "green.csv");
  csv << "S,H,G,symmetry_gap,bounds_ok\n";
  double worst_sym = 0;
  bool bounds_ok = true;
  for (const auto& c : cube) {
    Vec x = center, y = center;
    for (int j = 0; j < N; ++j) {
      x[j] += (2 * c[j] - 1) * 0.75 * reach;
      y[j] += (2 * c[N + j] - 1) * 0.75 * reach;
    }
    if ((x - y).norm() < 1e-3) continue;
    const double S = singular_s(N, x, y);
    const double H = provider->regular_part(x, y);
    const double G = provider->green(x, y);
    const double sym = std::abs(G - provider->green(y, x)) / std::max(1e-300, std::abs(G));
    const bool ok = G > 0 && G < S;
    worst_sym = std::max(worst_sym, sym);
    bounds_ok = bounds_ok && ok;
    csv << S << ',' << H << ',' << G << ',' << sym << ',' << (ok ? 1 : 0) << '\n';
  }
  const double sym_tol = cfg.domain->kind == DomainSpec::Kind::ball ? 1e-8 : 1e-5;
  manifest.checks.push_back({"green_symmetry", "G(x,y) = G(y,x)", worst_sym, sym_tol,
                             worst_sym <= sym_tol, ""});
  manifest.checks.push_back({"green_bounds", "0 < G(x,y) < S(x,y)",
                             bounds_ok ? 1.0 : 0.0, 1.0, bounds_ok, ""});
  return finish(manifest, (fs::path(cfg.output_dir) / "green_manifest.json").string());
}

int cmd_phi(const RunConfig& cfg) {
  require(cfg.problem && cfg.domain && cfg.peaks, "phi needs problem, domain and config");
  const auto provider = make_provider(*cfg.domain);
  fs::create_directories(cfg.output_dir);

  const double value = phi(*provider, *cfg.problem, *cfg.peaks);
  const PhiGradient grad = grad_phi(*provider, *cfg.problem, *cfg.peaks);
  const Mat hess = hessian_phi(*provider, *cfg.problem, *cfg.peaks);
  Eigen::SelfAdjointEigenSolver<Mat> es(hess);
  const Mat M = interaction_matrix(*provider, cfg.peaks->points);
  const SpectralData spec = lowest_eigenpair(M);

  ordered_json j;
  j["schema"] = "bnlab-phi/1";
  j["tool_version"] = kToolVersion;
  j["config"] = echo_config(cfg, "phi");
  j["phi"] = value;
  j["grad_norm"] = grad.flat().norm();
  j["grad_lambda"] = std::vector<double>(grad.lambda.data(),
                                         grad.lambda.data() + grad.lambda.size());
  j["hessian_eigenvalues"] = std::vector<double>(
      es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  j["rho"] = spec.rho;
  j["spectral_gap"] = spec.gap;
  j["interaction_positive_definite"] = spec.positive_definite;
  std::ofstream out(fs::path(cfg.output_dir) / "phi_report.json");
  out << j.dump(2) << "\n";
  std::cout << "phi=" << value << " grad_norm=" << grad.flat().norm() << "\n";
  return 0;
}

int cmd_crit(const RunConfig& cfg) {
  require(cfg.problem && cfg.domain && cfg.peaks, "crit needs problem, domain and config");
  const auto provider = make_provider(*cfg.domain);
  const int N = provider->dim();
  const int n = cfg.peaks->n();
  fs::create_directories(cfg.output_dir);

  Manifest manifest;
  manifest.command = "crit";
  manifest.config_echo = echo_config(cfg, "crit");

  const Vec center = cfg.domain->kind == DomainSpec::Kind::ball ? cfg.domain->center
                                                                : Vec(Vec::Zero(N));
  const double reach = provider->domain().boundary_distance(center);
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto random_start = [&]() {
    std::vector<Vec> pts;
    while (static_cast<int>(pts.size()) < n) {
      Vec x = center;
      for (int j = 0; j < N; ++j) x[j] += 0.8 * reach * unif(rng) / std::sqrt(N);
      bool ok = provider->domain().inside(x, 0.05 * reach);
      for (const auto& p : pts) ok = ok && (x - p).norm() > 0.1 * reach;
      if (ok) pts.push_back(x);
    }
    return pts;
  };

  ordered_json starts = ordered_json::array();
  int found = 0;
  double worst_rho = std::numeric_limits<double>::infinity();
  for (int s = 0; s < cfg.starts; ++s) {
    std::vector<Vec> x0 = s == 0 ? cfg.peaks->points : random_start();
    std::vector<double> l0 = cfg.peaks->heights;
    if (s > 0) {
      for (auto& l : l0) l *= std::exp(0.7 * unif(rng));
    }
    ordered_json row;
    row["start"] = s;
    try {
      NewtonOptions opts;
      opts.grad_tol = cfg.tolerances.get("crit_grad_tol");
      const CriticalPoint cp = find_critical(*provider, *cfg.problem, x0, l0, opts);
      const SpectralData spec =
          lowest_eigenpair(interaction_matrix(*provider, cp.config.points));
      ++found;
      worst_rho = std::min(worst_rho, spec.rho);
      row["outcome"] = "critical_point";
      ordered_json pts = ordered_json::array();
      for (const auto& p : cp.config.points) {
        pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
      }
      row["points"] = pts;
      row["heights"] = cp.config.heights;
      row["grad_norm"] = cp.grad_norm;
      row["rho"] = spec.rho;
      row["nondegenerate"] = cp.nondegenerate;
      row["hessian_eigenvalues"] = std::vector<double>(
          cp.hessian_eigenvalues.data(),
          cp.hessian_eigenvalues.data() + cp.hessian_eigenvalues.size());
    } catch (const NoConvergence& e) {
      row["outcome"] = "no_convergence";
      row["error"] = e.what();
    } catch (const LeftDomain& e) {
      row["outcome"] = "left_domain";
      row["error"] = e.what();
    }
    starts.push_back(row);
  }

  ordered_json j;
  j["schema"] = "bnlab-crit/1";
  j["tool_version"] = kToolVersion;
  j["config"] = manifest.config_echo;
  j["starts"] = starts;
  j["critical_points_found"] = found;
  std::ofstream out(fs::path(cfg.output_dir) / "crit_report.json");
  out << j.dump(2) << "\n";

  if (found > 0) {
    manifest.checks.push_back({"rho_nonnegative",
                               "lowest interaction eigenvalue >= 0 at critical points",
                               worst_rho, -1e-8, worst_rho >= -1e-8, ""});
  }
  manifest.notes.push_back("critical_points_found=" + std::to_string(found));
  return finish(manifest, (fs::path(cfg.output_dir) / "crit_manifest.json").string());
}

int cmd_sweep(const RunConfig& cfg) {
  require(cfg.problem.has_value(), "sweep needs a problem section");
  fs::create_directories(cfg.output_dir);
  const auto peaks = geometric_grid(cfg.sweep.M_min, cfg.sweep.M_max, cfg.sweep.count);

  std::vector<SweepPoint> sweep;
  if (cfg.sweep.epsilon_clamp) {
    // Clamped runs probe each height with the capped perturbation.
    sweep.resize(peaks.size());
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      sweep[i].M = peaks[i];
      try {
        const HeightSolve hs =
            epsilon_for_height(cfg.problem->N, cfg.problem->q, peaks[i], ShootOptions{},
                               static_cast<real_t>(*cfg.sweep.epsilon_clamp));
        sweep[i].epsilon = hs.epsilon;
        sweep[i].profile = hs.profile;
        sweep[i].accepted = true;
      } catch (const Error& e) {
        sweep[i].accepted = false;
        sweep[i].note = e.what();
      }
    }
  } else {
    sweep = sweep_heights(cfg.problem->N, cfg.problem->q, peaks, ShootOptions{},
                          cfg.threads);
  }

  SweepSpecEcho echo{cfg.sweep.M_min, cfg.sweep.M_max, cfg.sweep.count};
  write_dataset((fs::path(cfg.output_dir) / "dataset").string(), cfg.problem->N,
                cfg.problem->q, echo, sweep);

  int accepted = 0;
  ordered_json notes = ordered_json::array();
  for (const auto& sp : sweep) {
    if (sp.accepted) {
      ++accepted;
    } else {
      notes.push_back(sp.note);
    }
  }
  ordered_json j;
  j["schema"] = "bnlab-sweep/1";
  j["tool_version"] = kToolVersion;
  j["config"] = echo_config(cfg, "sweep");
  j["accepted"] = accepted;
  j["failed"] = static_cast<int>(sweep.size()) - accepted;
  j["failure_notes"] = notes;
  if (cfg.sweep.epsilon_clamp && *cfg.sweep.epsilon_clamp <= 0 && accepted == 0) {
    j["diagnosis"] =
        "every shot reported NoSolution with the perturbation clamped to zero, matching "
        "the nonexistence of positive solutions of the unperturbed critical equation on "
        "star-shaped domains";
  }
  std::ofstream out(fs::path(cfg.output_dir) / "sweep_manifest.json");
  out << j.dump(2) << "\n";
  std::cout << "sweep: accepted " << accepted << "/" << sweep.size() << " shots\n";
  if (accepted == 0) throw NoSolution("sweep produced no accepted profiles");
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const Dataset ds = read_dataset((fs::path(cfg.output_dir) / "dataset").string());
  ProblemParams params(ds.N, ds.q, 0.0);

  std::vector<SweepPoint> sweep;
  for (std::size_t i = 0; i < ds.entries.size(); ++i) {
    SweepPoint sp;
    sp.M = ds.entries[i].M;
    sp.epsilon = ds.entries[i].epsilon;
    sp.accepted = ds.entries[i].accepted;
    sp.note = ds.entries[i].note;
    if (sp.accepted) sp.profile = ds.profiles[i];
    sweep.push_back(std::move(sp));
  }

  Manifest manifest;
  manifest.command = "verify";
  manifest.config_echo = echo_config(cfg, "verify");
  manifest.config_echo["dataset"] = {{"N", ds.N}, {"q", ds.q},
                                     {"profiles", ds.entries.size()}};

  const SweepAnalysis an = analyze_sweep(sweep);
  DomainSpec ball = DomainSpec::make_ball(Vec::Zero(ds.N), 1.0);
  BallGreen provider(ball);
  const Constants cons = constants(params);
  const double R0 = provider.robin(Vec::Zero(ds.N));

  // Blow-up rate: exponent and limiting constant of eps * lambda^{(N-2)q/2-2}.
  const double target_expo = -(0.5 * (ds.N - 2) * ds.q - 2.0);
  const RateFit rate = verify_blowup_rate(an);
  const double expo_band = cfg.tolerances.get("rate_exponent_band");
  manifest.checks.push_back({"rate_exponent",
                             "eps ~ lambda^{-((N-2)q/2 - 2)} along the branch",
                             rate.exponent, expo_band,
                             std::abs(rate.exponent - target_expo) <= expo_band,
                             "target " + std::to_string(target_expo) +
                                 ", r2=" + std::to_string(rate.r_squared)});
  const double c_limit = ds.q * cons.A * cons.A * R0 /
                         ((params.two_star() - ds.q) * cons.B);
  const double c_last = an.epsilon.back() * std::pow(an.lambda.back(), -target_expo);
  const double c_rel = cfg.tolerances.get("rate_constant_rel");
  manifest.checks.push_back({"rate_constant",
                             "eps lambda^{(N-2)q/2-2} -> q A^2 R(0) / ((2*-q) B)",
                             c_last, c_rel,
                             std::abs(c_last - c_limit) <= c_rel * c_limit,
                             "limit " + std::to_string(c_limit)});
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < an.epsilon.size(); ++i) {
    if (an.epsilon[i + 1] >= an.epsilon[i]) monotone = false;
  }
  manifest.checks.push_back({"epsilon_monotone", "eps decreases along the height grid",
                             monotone ? 1.0 : 0.0, 1.0, monotone, ""});

  // Remainder decay.
  try {
    const WDecayLaw law = w_decay_law(ds.N, ds.q);
    const RateFit wfit = verify_w_decay(an, ds.N, ds.q);
    const double band = cfg.tolerances.get("wdecay_band");
    manifest.checks.push_back({"w_decay_exponent",
                               "remainder norm ~ (ln lambda)^p lambda^{-s} per the "
                               "(N,q) table",
                               wfit.exponent, band,
                               std::abs(wfit.exponent - law.exponent) <= band,
                               "target " + std::to_string(law.exponent) +
                                   ", r2=" + std::to_string(wfit.r_squared)});
    manifest.checks.push_back({"w_norm_vanishes", "remainder norm decreases to zero",
                               an.w_norm.back(), an.w_norm.front(),
                               an.w_norm.back() < an.w_norm.front(), ""});
  } catch (const ExponentOutOfRange& e) {
    manifest.notes.push_back(std::string("w-decay row unavailable: ") + e.what());
  }

  // Pohozaev balances on every accepted profile.
  double worst_pohozaev = 0;
  for (const auto& sp : sweep) {
    if (!sp.accepted) continue;
    worst_pohozaev = std::max(worst_pohozaev, pohozaev_global(sp.profile).relative_residual);
    for (double rho : {0.3, 0.6}) {
      worst_pohozaev = std::max(
          worst_pohozaev,
          pohozaev_local(sp.profile, static_cast<real_t>(rho)).relative_residual);
    }
  }
  const double ptol = cfg.tolerances.get("pohozaev_residual");
  manifest.checks.push_back({"pohozaev_residual",
                             "boundary/volume balance of the multiplier identity",
                             worst_pohozaev, ptol, worst_pohozaev <= ptol, ""});

  // Green-function limit at r = 0.7 for the most concentrated profile.
  const SweepPoint* last_accepted = nullptr;
  for (const auto& sp : sweep) {
    if (sp.accepted) last_accepted = &sp;
  }
  if (last_accepted) {
    const auto gl = green_limit_check(last_accepted->profile, provider);
    const double gtol = cfg.tolerances.get("green_limit_rel");
    manifest.checks.push_back({"green_limit",
                               "lambda^{(N-2)/2} u -> A G(0,.) away from the peak",
                               gl.rel_gap[1], gtol, gl.rel_gap[1] <= gtol,
                               "r=0.7"});
  }

  // Sandwich bounds and their stability across the sweep.
  double c0_max = 0, c0_min = std::numeric_limits<double>::infinity();
  double c1_max = 0, c1_min = std::numeric_limits<double>::infinity();
  for (const auto& sp : sweep) {
    if (!sp.accepted) continue;
    const SandwichReport sr = sandwich_check(sp.profile);
    c0_max = std::max(c0_max, sr.c_upper);
    c0_min = std::min(c0_min, sr.c_upper);
    c1_max = std::max(c1_max, sr.c_lower);
    c1_min = std::min(c1_min, sr.c_lower);
  }
  const double stab = std::max(c0_max / c0_min, c1_max / c1_min);
  const double stab_max = cfg.tolerances.get("sandwich_stability_max");
  manifest.checks.push_back({"sandwich_stability",
                             "two-sided bubble bounds stay comparable along the sweep",
                             stab, stab_max, stab <= stab_max && c1_min > 0, ""});

  // Concentration speed against F_{N,q}.
  try {
    const ConcentrationReport cr = verify_concentration(an, provider, params);
    const double cmax = cfg.tolerances.get("concentration_ratio_max");
    manifest.checks.push_back({"concentration_ratio",
                               "height deviation within O(F_{N,q}(lambda))",
                               cr.max_ratio, cmax, cr.max_ratio <= cmax,
                               "lambda* = " + std::to_string(cr.lambda_star)});
  } catch (const ExponentOutOfRange& e) {
    manifest.notes.push_back(std::string("concentration row unavailable: ") + e.what());
  }

  // Rescaled profiles approach the standard bubble.
  double gap_first = 0, gap_last = 0;
  bool first_set = false;
  for (const auto& sp : sweep) {
    if (!sp.accepted) continue;
    const double gap = rescaled_profile_gap(sp.profile);
    if (!first_set) {
      gap_first = gap;
      first_set = true;
    }
    gap_last = gap;
  }
  manifest.checks.push_back({"rescaled_bubble_gap",
                             "rescaled profiles converge to the standard bubble",
                             gap_last, gap_first, gap_last <= gap_first, ""});

  fs::create_directories(cfg.output_dir);
  return finish(manifest, (fs::path(cfg.output_dir) / "verify_manifest.json").string());
}

int cmd_pohozaev(const RunConfig& cfg, const std::vector<double>& rho_list) {
  const Dataset ds = read_dataset((fs::path(cfg.output_dir) / "dataset").string());
  fs::create_directories(cfg.output_dir);
  std::ofstream csv(fs::path(cfg.output_dir) / "pohozaev.csv");
  csv << "M,epsilon,kind,rho,lhs,rhs,residual\n";
  const double tol = cfg.tolerances.get("pohozaev_residual");
  double worst = 0;
  for (std::size_t i = 0; i < ds.entries.size(); ++i) {
    if (!ds.entries[i].accepted) continue;
    const RadialProfile& p = ds.profiles[i];
    const auto g = pohozaev_global(p);
    worst = std::max(worst, g.relative_residual);
    csv << format_real(ds.entries[i].M) << ',' << format_real(ds.entries[i].epsilon)
        << ",global," << static_cast<double>(p.radius()) << ',' << g.lhs << ',' << g.rhs
        << ',' << g.relative_residual << '\n';
    for (double rho : rho_list) {
      const auto l = pohozaev_local(p, static_cast<real_t>(rho));
      worst = std::max(worst, l.relative_residual);
      csv << format_real(ds.entries[i].M) << ',' << format_real(ds.entries[i].epsilon)
          << ",local," << rho << ',' << l.lhs << ',' << l.rhs << ','
          << l.relative_residual << '\n';
    }
  }
  Manifest manifest;
  manifest.command = "pohozaev";
  manifest.config_echo = echo_config(cfg, "pohozaev");
  manifest.checks.push_back({"pohozaev_residual",
                             "boundary/volume balance of the multiplier identity",
                             worst, tol, worst <= tol, ""});
  return finish(manifest, (fs::path(cfg.output_dir) / "pohozaev_manifest.json").string());
}

int cmd_report(const RunConfig& cfg) {
  const std::vector<std::string> names = {"robin_manifest.json",   "green_manifest.json",
                                          "crit_manifest.json",    "sweep_manifest.json",
                                          "verify_manifest.json",  "pohozaev_manifest.json"};
  std::ostringstream text;
  bool any = false, all_pass = true;
  for (const auto& name : names) {
    const fs::path path = fs::path(cfg.output_dir) / name;
    if (!fs::exists(path)) continue;
    any = true;
    std::ifstream in(path);
    ordered_json j;
    in >> j;
    text << "== " << name << " ==\n";
    if (j.contains("checks")) {
      for (const auto& c : j["checks"]) {
        const bool pass = c.value("pass", false);
        all_pass = all_pass && pass;
        text << (pass ? "  PASS " : "  FAIL ") << c.value("id", "?") << "  measured="
             << c.value("measured", 0.0) << " tol=" << c.value("tolerance", 0.0) << "\n"
             << "        " << c.value("claim", "") << "\n";
      }
    }
    if (j.contains("diagnosis")) text << "  note: " << j["diagnosis"].get<std::string>() << "\n";
  }
  if (!any) throw ConfigError("no manifests found under " + cfg.output_dir);
  std::ofstream out(fs::path(cfg.output_dir) / "report.txt");
  out << text.str();
  std::cout << text.str();
  return all_pass ? 0 : 2;
}

}  // namespace bnlab
