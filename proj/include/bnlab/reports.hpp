#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "bnlab/radial.hpp"

namespace bnlab {

using ordered_json = nlohmann::ordered_json;

// One verification row: what was measured, against which bound, and the claim
// it instantiates.
struct CheckRow {
  std::string id;
  std::string claim;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
  std::string detail;
};

struct Manifest {
  std::string command;
  ordered_json config_echo;
  std::vector<CheckRow> checks;
  std::vector<std::string> notes;

  bool all_pass() const;
  ordered_json to_json() const;
  void write(const std::string& path) const;
};

extern const char* kToolVersion;

// Dataset persistence: one index plus one CSV per profile (columns r,u,u_prime
// at full extended precision).
struct DatasetEntry {
  std::string file;
  real_t M = 0;
  real_t epsilon = 0;
  bool accepted = false;
  std::string note;
};

struct SweepSpecEcho {
  double M_min = 0;
  double M_max = 0;
  int count = 0;
};

struct Dataset {
  int N = 0;
  double q = 0;
  SweepSpecEcho sweep_echo;
  std::vector<DatasetEntry> entries;
  std::vector<RadialProfile> profiles;  // aligned with entries; empty when rejected
};

void write_profile_csv(const std::string& path, const RadialProfile& profile);
RadialProfile read_profile_csv(const std::string& path, int N, double q, real_t epsilon,
                               real_t M);

void write_dataset(const std::string& dir, int N, double q, const SweepSpecEcho& echo,
                   const std::vector<SweepPoint>& sweep);
Dataset read_dataset(const std::string& dir);

std::string format_real(real_t v);
real_t parse_real(const std::string& s);

}  // namespace bnlab
