#include <CLI11.hpp>

#include <iostream>

#include "bnlab/commands.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::vector<std::string> tol_overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "path to the JSON run configuration")
      ->required();
  sub->add_option("--out", c.out_dir, "output directory (overrides config)");
  sub->add_option("--threads", c.threads, "worker threads for sweeps");
  sub->add_option("--tol", c.tol_overrides, "tolerance override NAME=VALUE");
}

bnlab::RunConfig load(const Common& c) {
  bnlab::RunConfig cfg = bnlab::RunConfig::from_file(c.config_path);
  cfg.apply_env_overrides();
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (c.threads > 0) cfg.threads = c.threads;
  for (const auto& kv : c.tol_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw bnlab::ConfigError("--tol expects NAME=VALUE, got '" + kv + "'");
    }
    cfg.tolerances.set(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for blow-up asymptotics of the critical elliptic "
               "problem with subcritical perturbation"};
  app.require_subcommand(1);

  Common common;
  std::vector<double> rho_list = {0.3, 0.6};

  auto* robin = app.add_subcommand("robin", "Robin function along a ray, with the "
                                            "boundary asymptotics ratio");
  auto* green = app.add_subcommand("green", "Green function sample table and bounds");
  auto* phi = app.add_subcommand("phi", "reduced energy, gradient and Hessian at a config");
  auto* crit = app.add_subcommand("crit", "multi-start critical point search");
  auto* sweep = app.add_subcommand("sweep", "solve a peak-height sweep on the unit ball");
  auto* verify = app.add_subcommand("verify", "run the asymptotic checks on a dataset");
  auto* pohozaev = app.add_subcommand("pohozaev", "residual table of the integral balances");
  auto* report = app.add_subcommand("report", "render manifests into a text summary");
  for (auto* sub : {robin, green, phi, crit, sweep, verify, pohozaev, report}) {
    add_common(sub, common);
  }
  pohozaev->add_option("--rho", rho_list, "interior radii for the local balance");

  CLI11_PARSE(app, argc, argv);

  try {
    const bnlab::RunConfig cfg = load(common);
    if (robin->parsed()) return bnlab::cmd_robin(cfg);
    if (green->parsed()) return bnlab::cmd_green(cfg);
    if (phi->parsed()) return bnlab::cmd_phi(cfg);
    if (crit->parsed()) return bnlab::cmd_crit(cfg);
    if (sweep->parsed()) return bnlab::cmd_sweep(cfg);
    if (verify->parsed()) return bnlab::cmd_verify(cfg);
    if (pohozaev->parsed()) return bnlab::cmd_pohozaev(cfg, rho_list);
    if (report->parsed()) return bnlab::cmd_report(cfg);
  } catch (const bnlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const bnlab::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
