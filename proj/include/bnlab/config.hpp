#pragma once

#include <map>
#include <optional>
#include <string>

#include "bnlab/domain.hpp"
#include "bnlab/problem.hpp"
#include "bnlab/reduced.hpp"

namespace bnlab {

// Named tolerance registry with defaults; unknown names are rejected.
class Tolerances {
 public:
  Tolerances();
  double get(const std::string& name) const;
  void set(const std::string& name, double value);
  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct SweepSpec {
  double M_min = 10.0;
  double M_max = 1e4;
  int count = 9;
  std::string spacing = "geometric";
  std::optional<double> epsilon_clamp;
};

// Parsed and validated run configuration. The file is JSON with the sections
// documented in the README; unknown keys anywhere are an error.
struct RunConfig {
  std::optional<ProblemParams> problem;
  std::optional<DomainSpec> domain;
  std::optional<Config> peaks;  // points + heights for phi / crit
  SweepSpec sweep;
  Tolerances tolerances;
  std::string output_dir = "out";
  int threads = 1;
  int starts = 50;
  unsigned seed = 20240915;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json_text(const std::string& text);

  void apply_env_overrides();  // BNLAB_OUTPUT_DIR, BNLAB_THREADS only
};

}  // namespace bnlab
