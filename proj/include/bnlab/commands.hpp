#pragma once

#include <memory>

#include "bnlab/config.hpp"
#include "bnlab/green.hpp"
#include "bnlab/reports.hpp"

namespace bnlab {

std::unique_ptr<GreenProvider> make_provider(const DomainSpec& domain);

// Subcommand bodies. Each writes its outputs under config.output_dir and
// returns a process exit code: 0 = all checks passed, 2 = a check failed.
// Configuration and numerical failures surface as exceptions (mapped to 3/4
// by the CLI driver).
int cmd_robin(const RunConfig& config);
int cmd_green(const RunConfig& config);
int cmd_phi(const RunConfig& config);
int cmd_crit(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_pohozaev(const RunConfig& config, const std::vector<double>& rho_list);
int cmd_report(const RunConfig& config);

}  // namespace bnlab
