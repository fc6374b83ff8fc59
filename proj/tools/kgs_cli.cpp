// kgs <subcommand> --config <path> [--out <dir>]
//
// Exit status: 0 all checks passed, 1 experiment failed, 2 invalid
// invocation or config (nothing written).

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgs/kgs.h"

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

int run(const std::string& experiment, const std::string& config_path, const std::string& out_dir, bool quiet) {
  kgs_config* cfg = nullptr;
  kgs_status st = config_path.empty() ? kgs_config_from_string(experiment.c_str(), "{}", &cfg)
                                      : kgs_config_from_file(experiment.c_str(), config_path.c_str(), &cfg);
  if (st != KGS_OK) {
    std::fprintf(stderr, "kgs: invalid config: %s\n", kgs_last_error());
    return kExitConfig;
  }
  if (!out_dir.empty() && kgs_config_set_output_dir(cfg, out_dir.c_str()) != KGS_OK) {
    std::fprintf(stderr, "kgs: %s\n", kgs_last_error());
    kgs_config_free(cfg);
    return kExitConfig;
  }
  kgs_result* res = nullptr;
  st = kgs_run(cfg, &res);
  kgs_config_free(cfg);
  if (st == KGS_ERR_CONFIG) {
    std::fprintf(stderr, "kgs: invalid config: %s\n", kgs_last_error());
    return kExitConfig;
  }
  if (st != KGS_OK) {
    std::fprintf(stderr, "kgs: %s failed: %s\n", experiment.c_str(), kgs_last_error());
    return kExitFailed;
  }
  const bool ok = kgs_result_passed(res) != 0;
  if (!quiet) std::fputs(kgs_result_summary(res), stdout);
  kgs_result_free(res);
  return ok ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-line Klein-Gordon-Schrodinger experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kgs_version()));

  std::string config_path, out_dir;
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only set the exit status");

  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (size_t i = 0; i < kgs_experiment_count(); ++i) {
    const std::string name = kgs_experiment_name(i);
    CLI::App* sub = app.add_subcommand(name, "Run " + name);
    auto* opt = sub->add_option("-c,--config", config_path, "JSON run configuration");
    if (name != "report") opt->required();
    sub->add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
    subs.emplace_back(name, sub);
  }
  std::string defaults_for;
  CLI::App* defaults = app.add_subcommand("defaults", "Print the default config of an experiment");
  defaults->add_option("experiment", defaults_for, "Experiment name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (defaults->parsed()) {
    char* text = nullptr;
    if (kgs_default_config(defaults_for.c_str(), &text) != KGS_OK) {
      std::fprintf(stderr, "kgs: %s\n", kgs_last_error());
      return kExitConfig;
    }
    std::printf("%s\n", text);
    kgs_string_free(text);
    return 0;
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) return run(name, config_path, out_dir, quiet);
  return kExitConfig;
}
