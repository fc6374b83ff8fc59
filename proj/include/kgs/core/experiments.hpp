#pragma once

#include <string>
#include <vector>

#include "kgs/core/config.hpp"
#include "kgs/core/report.hpp"

namespace kgs {

struct ExperimentOutput {
  json report;
  bool passed = false;
  std::vector<std::string> artifacts;  ///< file names written under the output directory
  std::string summary;                 ///< human-readable digest
};

/// Runs `cfg.experiment`, then writes report.json and CSV dumps into
/// cfg.out_dir. Numerical failures end up in the report (passed = false);
/// configuration errors propagate before anything is written.
ExperimentOutput run_experiment(const RunConfig& cfg);

/// Builds the problem described by the data section, with boundary series
/// sampled on [0, T].
LocalProblem make_problem(const RunConfig& cfg, double T);

/// Human-readable digest of a set of report.json trees.
std::string summarize_reports(const std::vector<json>& reports);

}  // namespace kgs
