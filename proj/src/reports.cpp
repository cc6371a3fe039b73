#include "bnlab/reports.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace bnlab {

const char* kToolVersion = "0.1.0";

bool Manifest::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

ordered_json Manifest::to_json() const {
  ordered_json j;
  j["schema"] = "bnlab-manifest/1";
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config_echo;
  ordered_json rows = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json row;
    row["id"] = c.id;
    row["claim"] = c.claim;
    row["measured"] = c.measured;
    row["tolerance"] = c.tolerance;
    row["pass"] = c.pass;
    if (!c.detail.empty()) row["detail"] = c.detail;
    rows.push_back(row);
  }
  j["checks"] = rows;
  j["notes"] = notes;
  j["all_pass"] = all_pass();
  return j;
}

void Manifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest to " + path);
  out << to_json().dump(2) << "\n";
}

std::string format_real(real_t v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

real_t parse_real(const std::string& s) { return std::strtold(s.c_str(), nullptr); }

void write_profile_csv(const std::string& path, const RadialProfile& profile) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write profile to " + path);
  out << "r,u,u_prime\n";
  for (std::size_t k = 0; k < profile.r.size(); ++k) {
    out << format_real(profile.r[k]) << ',' << format_real(profile.u[k]) << ','
        << format_real(profile.du[k]) << '\n';
  }
}

RadialProfile read_profile_csv(const std::string& path, int N, double q, real_t epsilon,
                               real_t M) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read profile from " + path);
  std::string line;
  if (!std::getline(in, line) || line != "r,u,u_prime") {
    throw Error("profile CSV header mismatch in " + path);
  }
  RadialProfile p;
  p.N = N;
  p.q = q;
  p.epsilon = epsilon;
  p.peak = M;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw Error("malformed profile row in " + path);
    }
    p.r.push_back(parse_real(line.substr(0, c1)));
    p.u.push_back(parse_real(line.substr(c1 + 1, c2 - c1 - 1)));
    p.du.push_back(parse_real(line.substr(c2 + 1)));
  }
  if (p.r.size() < 2) throw Error("profile CSV too short: " + path);
  return p;
}

void write_dataset(const std::string& dir, int N, double q, const SweepSpecEcho& echo,
                   const std::vector<SweepPoint>& sweep) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  ordered_json index;
  index["schema"] = "bnlab-dataset/1";
  index["tool_version"] = kToolVersion;
  index["problem"] = {{"N", N}, {"q", q}};
  index["sweep"] = {{"M_min", echo.M_min}, {"M_max", echo.M_max}, {"count", echo.count}};
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& sp = sweep[i];
    char name[32];
    std::snprintf(name, sizeof name, "profile_%03zu.csv", i);
    ordered_json row;
    row["file"] = name;
    row["M"] = format_real(sp.M);
    row["epsilon"] = format_real(sp.epsilon);
    row["accepted"] = sp.accepted;
    row["note"] = sp.note;
    rows.push_back(row);
    if (sp.accepted) {
      write_profile_csv((fs::path(dir) / name).string(), sp.profile);
    }
  }
  index["profiles"] = rows;
  std::ofstream out(fs::path(dir) / "index.json");
  if (!out) throw Error("cannot write dataset index in " + dir);
  out << index.dump(2) << "\n";
}

Dataset read_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "index.json");
  if (!in) throw Error("cannot open dataset index in " + dir);
  ordered_json index;
  try {
    in >> index;
  } catch (const std::exception& e) {
    throw Error(std::string("dataset index parse failure: ") + e.what());
  }
  if (index.value("schema", "") != "bnlab-dataset/1") {
    throw Error("unsupported dataset schema");
  }
  Dataset ds;
  ds.N = index["problem"]["N"].get<int>();
  ds.q = index["problem"]["q"].get<double>();
  ds.sweep_echo.M_min = index["sweep"]["M_min"].get<double>();
  ds.sweep_echo.M_max = index["sweep"]["M_max"].get<double>();
  ds.sweep_echo.count = index["sweep"]["count"].get<int>();
  for (const auto& row : index["profiles"]) {
    DatasetEntry e;
    e.file = row["file"].get<std::string>();
    e.M = parse_real(row["M"].get<std::string>());
    e.epsilon = parse_real(row["epsilon"].get<std::string>());
    e.accepted = row["accepted"].get<bool>();
    e.note = row.value("note", "");
    ds.entries.push_back(e);
    if (e.accepted) {
      ds.profiles.push_back(read_profile_csv((fs::path(dir) / e.file).string(), ds.N, ds.q,
                                             e.epsilon, e.M));
    } else {
      ds.profiles.emplace_back();
    }
  }
  return ds;
}

}  // namespace bnlab
