#include "kgs/kgs.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "kgs/core/config.hpp"
#include "kgs/core/error.hpp"
#include "kgs/core/experiments.hpp"

struct kgs_config {
  kgs::RunConfig cfg;
  std::string json_text;
};

struct kgs_result {
  kgs::ExperimentOutput output;
  std::string report_text;
};

namespace {

thread_local std::string last_error;

kgs_status status_of(kgs::ErrorKind k) {
  switch (k) {
    case kgs::ErrorKind::Config: return KGS_ERR_CONFIG;
    case kgs::ErrorKind::Numeric: return KGS_ERR_NUMERIC;
    case kgs::ErrorKind::Validation: return KGS_ERR_VALIDATION;
    case kgs::ErrorKind::Convergence: return KGS_ERR_CONVERGENCE;
    case kgs::ErrorKind::Io: return KGS_ERR_IO;
  }
  return KGS_ERR_INTERNAL;
}

template <class Fn>
kgs_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return KGS_OK;
  } catch (const kgs::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KGS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KGS_ERR_INTERNAL;
  }
}

kgs_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return KGS_ERR_ARGUMENT;
}

kgs_config* wrap(kgs::RunConfig cfg) {
  auto h = std::make_unique<kgs_config>();
  h->json_text = cfg.resolved.dump(2);
  h->cfg = std::move(cfg);
  return h.release();
}

}  // namespace

extern "C" {

const char* kgs_version(void) { return "1.0.0"; }

const char* kgs_last_error(void) { return last_error.c_str(); }

size_t kgs_experiment_count(void) { return kgs::experiment_names().size(); }

const char* kgs_experiment_name(size_t index) {
  const auto& names = kgs::experiment_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

kgs_status kgs_default_config(const char* experiment, char** json_out) {
  if (!experiment) return null_argument("experiment");
  if (!json_out) return null_argument("json_out");
  return guarded([&] {
    const std::string text = kgs::default_config(experiment).dump(2);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *json_out = buf;
  });
}

void kgs_string_free(char* s) { std::free(s); }

kgs_status kgs_config_from_file(const char* experiment, const char* path, kgs_config** out) {
  if (!experiment) return null_argument("experiment");
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = wrap(kgs::load_config(experiment, path)); });
}

kgs_status kgs_config_from_string(const char* experiment, const char* json_text, kgs_config** out) {
  if (!experiment) return null_argument("experiment");
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    kgs::json user;
    try {
      user = kgs::json::parse(json_text, nullptr, true, true);
    } catch (const kgs::json::parse_error& e) {
      kgs::fail(kgs::ErrorKind::Config, std::string("malformed config: ") + e.what());
    }
    if (!user.is_object()) kgs::fail(kgs::ErrorKind::Config, "config root must be an object");
    if (user.contains("experiment")) {
      if (user["experiment"] != experiment)
        kgs::fail(kgs::ErrorKind::Config, "config names a different experiment");
      user.erase("experiment");
    }
    *out = wrap(kgs::resolve_config(experiment, user));
  });
}

kgs_status kgs_config_set_output_dir(kgs_config* cfg, const char* dir) {
  if (!cfg) return null_argument("cfg");
  if (!dir) return null_argument("dir");
  return guarded([&] {
    if (!*dir) kgs::fail(kgs::ErrorKind::Config, "output directory must not be empty");
    cfg->cfg.out_dir = dir;
    cfg->cfg.resolved["output"]["dir"] = dir;
    cfg->json_text = cfg->cfg.resolved.dump(2);
  });
}

const char* kgs_config_json(const kgs_config* cfg) { return cfg ? cfg->json_text.c_str() : nullptr; }

void kgs_config_free(kgs_config* cfg) { delete cfg; }

kgs_status kgs_run(const kgs_config* cfg, kgs_result** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<kgs_result>();
    r->output = kgs::run_experiment(cfg->cfg);
    r->report_text = r->output.report.dump(2) + "\n";
    *out = r.release();
  });
}

int kgs_result_passed(const kgs_result* r) { return r && r->output.passed ? 1 : 0; }

const char* kgs_result_report(const kgs_result* r) { return r ? r->report_text.c_str() : nullptr; }

const char* kgs_result_summary(const kgs_result* r) { return r ? r->output.summary.c_str() : nullptr; }

size_t kgs_result_artifact_count(const kgs_result* r) { return r ? r->output.artifacts.size() : 0; }

const char* kgs_result_artifact(const kgs_result* r, size_t index) {
  if (!r || index >= r->output.artifacts.size()) return nullptr;
  return r->output.artifacts[index].c_str();
}

void kgs_result_free(kgs_result* r) { delete r; }

}  // extern "C"
