#include "bnlab/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>

namespace bnlab {

using json = nlohmann::ordered_json;

Tolerances::Tolerances() {
  values_ = {
      {"provider_agreement", 1e-5},   {"robin_ratio_rel", 0.10},
      {"grad_fd_rel", 1e-6},          {"hess_fd_rel", 1e-4},
      {"constants_rel", 1e-8},        {"rate_exponent_band", 0.05},
      {"rate_constant_rel", 0.05},    {"wdecay_band", 0.3},
      {"pohozaev_residual", 1e-6},    {"green_limit_rel", 0.05},
      {"pq_theta_rel", 1e-6},         {"pq_center_rel", 1e-4},
      {"crit_grad_tol", 1e-10},       {"concentration_ratio_max", 10.0},
      {"sandwich_stability_max", 10.0},
  };
}

double Tolerances::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw ConfigError("unknown tolerance name '" + name + "'");
  return it->second;
}

void Tolerances::set(const std::string& name, double value) {
  if (!values_.count(name)) throw ConfigError("unknown tolerance name '" + name + "'");
  values_[name] = value;
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

Vec parse_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a non-empty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + " must contain numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse failure: ") + e.what());
  }
  reject_unknown(j, {"problem", "domain", "config", "sweep", "tolerances", "output_dir",
                     "threads", "starts", "seed"},
                 "top level");

  RunConfig cfg;
  if (j.contains("problem")) {
    const json& p = j["problem"];
    reject_unknown(p, {"N", "q", "epsilon"}, "problem");
    if (!p.contains("N") || !p.contains("q")) {
      throw ConfigError("problem requires keys N and q");
    }
    cfg.problem.emplace(p["N"].get<int>(), p["q"].get<double>(),
                        p.value("epsilon", 0.0));
  }
  if (j.contains("domain")) {
    const json& d = j["domain"];
    const std::string kind = d.value("kind", "");
    if (kind == "ball") {
      reject_unknown(d, {"kind", "center", "radius"}, "domain");
      cfg.domain = DomainSpec::make_ball(parse_point(d.at("center"), "domain.center"),
                                         d.at("radius").get<double>());
    } else if (kind == "generic") {
      reject_unknown(d, {"kind", "boundary_points", "outward_normals"}, "domain");
      std::vector<Vec> pts, nrm;
      for (const auto& p : d.at("boundary_points")) {
        pts.push_back(parse_point(p, "domain.boundary_points[]"));
      }
      for (const auto& p : d.at("outward_normals")) {
        nrm.push_back(parse_point(p, "domain.outward_normals[]"));
      }
      cfg.domain = DomainSpec::make_generic(std::move(pts), std::move(nrm));
    } else {
      throw ConfigError("domain.kind must be 'ball' or 'generic'");
    }
  }
  if (j.contains("config")) {
    const json& c = j["config"];
    reject_unknown(c, {"points", "heights"}, "config");
    Config peaks;
    for (const auto& p : c.at("points")) {
      peaks.points.push_back(parse_point(p, "config.points[]"));
    }
    for (const auto& h : c.at("heights")) peaks.heights.push_back(h.get<double>());
    cfg.peaks = std::move(peaks);
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, {"M_min", "M_max", "count", "spacing", "epsilon_clamp"}, "sweep");
    cfg.sweep.M_min = s.value("M_min", cfg.sweep.M_min);
    cfg.sweep.M_max = s.value("M_max", cfg.sweep.M_max);
    cfg.sweep.count = s.value("count", cfg.sweep.count);
    cfg.sweep.spacing = s.value("spacing", cfg.sweep.spacing);
    if (s.contains("epsilon_clamp")) {
      cfg.sweep.epsilon_clamp = s["epsilon_clamp"].get<double>();
    }
    if (cfg.sweep.spacing != "geometric") {
      throw ConfigError("sweep.spacing supports only 'geometric'");
    }
    if (!(cfg.sweep.M_min > 0) || !(cfg.sweep.M_max > cfg.sweep.M_min)) {
      throw ConfigError("sweep requires 0 < M_min < M_max");
    }
    if (cfg.sweep.count < 2) throw ConfigError("sweep.count must be >= 2");
  }
  if (j.contains("tolerances")) {
    for (const auto& item : j["tolerances"].items()) {
      if (!item.value().is_number()) {
        throw ConfigError("tolerance '" + item.key() + "' must be a number");
      }
      cfg.tolerances.set(item.key(), item.value().get<double>());
    }
  }
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.starts = j.value("starts", cfg.starts);
  cfg.seed = j.value("seed", cfg.seed);
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.starts < 1) throw ConfigError("starts must be >= 1");

  if (cfg.peaks && cfg.domain) cfg.peaks->validate(*cfg.domain);
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

void RunConfig::apply_env_overrides() {
  if (const char* out = std::getenv("BNLAB_OUTPUT_DIR")) output_dir = out;
  if (const char* th = std::getenv("BNLAB_THREADS")) {
    try {
      threads = std::stoi(th);
    } catch (...) {
      throw ConfigError("BNLAB_THREADS must be an integer");
    }
    if (threads < 1) throw ConfigError("BNLAB_THREADS must be >= 1");
  }
}

}  // namespace bnlab
