// Runs the pinned acceptance configurations and prints one PASS/FAIL line
// per criterion. Usage: acceptance <config dir> <work dir> [criterion ids...]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgs/core/config.hpp"
#include "kgs/core/error.hpp"
#include "kgs/core/experiments.hpp"

namespace fs = std::filesystem;
using kgs::json;

namespace {

struct RunSpec {
  std::string experiment;
  std::string config;  // file name under the config dir
};

struct RunOutcome {
  json report;
  double seconds = 0.0;
  std::string error;
};

struct Criterion {
  int id;
  std::string title;
  std::string run;
  std::vector<std::string> checks;  // names in report.checks; a trailing '*' matches a prefix
  double max_seconds = 0.0;         // 0: not timed
  std::function<bool(const json&, std::string&)> extra;
};

const std::map<std::string, RunSpec> kRuns{
    {"kg", {"linear-kg-check", "linear_kg.json"}},
    {"schrodinger", {"linear-schrodinger-check", "linear_schrodinger.json"}},
    {"global", {"global-solve", "global_conservation.json"}},
    {"local", {"local-solve", "local_suite.json"}},
    {"uniqueness", {"uniqueness-check", "uniqueness.json"}},
    {"smoothing", {"smoothing-check", "smoothing.json"}},
    {"growth", {"global-solve", "growth.json"}},
    {"estimates", {"estimates-lab", "estimates.json"}},
};

std::vector<Criterion> criteria() {
  return {
      {1, "linear KG boundary formula vs FD", "kg", {"rel_err_vs_fd", "trace_recovery", "t0_field"}, 60.0, {}},
      {2, "linear Schrodinger boundary formula vs FD", "schrodinger", {"rel_err_vs_fd", "trace_recovery"}, 0.0, {}},
      {3, "L2 conservation and dt halving", "global", {"mass_drift", "drift_reduction_on_halving"}, 0.0, {}},
      {4,
       "oddness of free flow and through restarts",
       "global",
       {"even_part_free_flow", "even_part_restart"},
       0.0,
       [](const json& r, std::string& note) {
         const auto restarts = r["metrics"].value("restarts", std::size_t{0});
         note = "restarts=" + std::to_string(restarts) + ">=10";
         return restarts >= 10;
       }},
      {5,
       "Picard contraction on the seeded suite",
       "local",
       {"converged", "max_residual_ratio", "iterations", "suite_converged", "suite_max_residual_ratio",
        "suite_max_iterations"},
       0.0,
       {}},
      {6, "local solve vs coupled FD oracle", "local", {"oracle_rel_err_u", "oracle_rel_err_n"}, 0.0, {}},
      {7, "extension independence", "uniqueness", {"extension_independence"}, 0.0, {}},
      {8, "nonlinear smoothing", "smoothing", {"converged", "u_tail_slope_gap"}, 0.0, {}},
      {9,
       "growth bound shape and mT across wave scalings",
       "growth",
       {"growth_fit_residual_scale_1", "growth_fit_residual_scale_4", "doubling_advance_spread"},
       0.0,
       {}},
      {10, "estimate lab refinement stability", "estimates", {"slope_*", "defined_*", "refinement_stable"}, 300.0,
       {}},
  };
}

RunOutcome execute(const RunSpec& spec, const fs::path& config_dir, const fs::path& work, const std::string& key) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    kgs::RunConfig cfg = kgs::load_config(spec.experiment, (config_dir / spec.config).string());
    cfg.out_dir = (work / key).string();
    kgs::ExperimentOutput res = kgs::run_experiment(cfg);
    out.report = res.report;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string describe(const json& c) {
  std::ostringstream s;
  s << c["name"].get<std::string>();
  if (c.contains("value")) {
    char buf[64];
    if (c["value"].is_null())
      s << "=nan";
    else {
      std::snprintf(buf, sizeof buf, "=%.4g", c["value"].get<double>());
      s << buf;
    }
    std::snprintf(buf, sizeof buf, "%.4g", c["threshold"].get<double>());
    s << c["relation"].get<std::string>() << buf;
  } else {
    s << (c["pass"].get<bool>() ? "=true" : "=false");
  }
  return s.str();
}

bool evaluate(const Criterion& crit, const RunOutcome& run, std::string& detail) {
  if (!run.error.empty()) {
    detail = "error: " + run.error;
    return false;
  }
  const json& r = run.report;
  if (r.contains("failure")) detail = "failure: " + r["failure"].dump() + "; ";
  bool ok = true;
  std::vector<std::string> parts;
  for (const auto& want : crit.checks) {
    const bool prefix = !want.empty() && want.back() == '*';
    const std::string stem = prefix ? want.substr(0, want.size() - 1) : want;
    bool found = false;
    for (const auto& c : r["checks"]) {
      const std::string name = c["name"].get<std::string>();
      if (prefix ? name.rfind(stem, 0) == 0 : name == stem) {
        found = true;
        ok = ok && c["pass"].get<bool>();
        if (!c["pass"].get<bool>() || !prefix) parts.push_back(describe(c));
      }
    }
    if (!found) {
      ok = false;
      parts.push_back(want + " missing");
    } else if (prefix) {
      parts.push_back(want + " checked");
    }
  }
  if (crit.extra) {
    std::string note;
    ok = crit.extra(r, note) && ok;
    parts.push_back(note);
  }
  if (crit.max_seconds > 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime=%.1fs<=%.0fs", run.seconds, crit.max_seconds);
    parts.push_back(buf);
    ok = ok && run.seconds <= crit.max_seconds;
  }
  for (std::size_t i = 0; i < parts.size(); ++i) detail += (i ? ", " : "") + parts[i];
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <config dir> <work dir> [criterion ids...]\n");
    return 2;
  }
  const fs::path config_dir = argv[1], work = argv[2];
  std::set<int> selected;
  for (int i = 3; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  fs::create_directories(work);

  std::map<std::string, RunOutcome> runs;
  int failed = 0;
  for (const auto& crit : criteria()) {
    if (!selected.empty() && !selected.count(crit.id)) continue;
    if (!runs.count(crit.run)) {
      runs[crit.run] = execute(kRuns.at(crit.run), config_dir, work, crit.run);
      std::fprintf(stderr, "  [run %s: %.1fs]\n", crit.run.c_str(), runs[crit.run].seconds);
    }
    std::string detail;
    const bool ok = evaluate(crit, runs[crit.run], detail);
    if (!ok) ++failed;
    std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", crit.id, crit.title.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
