#pragma once

#include "eemimo/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace eemimo {

// Subcommands; each writes its CSV files into cfg.output_dir and a short
// summary to `log`. Invalid requests throw std::invalid_argument.
void run_optimize(const ExperimentConfig& cfg, std::ostream& log);
void run_sweep(const ExperimentConfig& cfg, std::ostream& log);
void run_curves(const ExperimentConfig& cfg, std::ostream& log);
void run_montecarlo(const ExperimentConfig& cfg, std::ostream& log);
void run_multicell(const ExperimentConfig& cfg, std::ostream& log);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

// Oracle and property checks on the configured profile and scenario.
std::vector<CheckResult> run_property_checks(const ExperimentConfig& cfg);

// Returns the process exit status: 0, or 1 when a check fails.
int run_subcommand(const std::string& cmd, const ExperimentConfig& cfg, std::ostream& log);

const std::vector<std::string>& subcommands();

}  // namespace eemimo
