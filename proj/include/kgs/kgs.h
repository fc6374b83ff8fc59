/* C interface to the half-line Klein-Gordon-Schrodinger library. */
#ifndef KGS_KGS_H
#define KGS_KGS_H

#include <stddef.h>

#if defined(KGS_BUILDING_LIBRARY)
#define KGS_API __attribute__((visibility("default")))
#else
#define KGS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kgs_status {
  KGS_OK = 0,
  KGS_ERR_CONFIG = 1,      /* invalid configuration; nothing was written */
  KGS_ERR_NUMERIC = 2,
  KGS_ERR_VALIDATION = 3,
  KGS_ERR_CONVERGENCE = 4,
  KGS_ERR_IO = 5,
  KGS_ERR_ARGUMENT = 6,    /* null handle or pointer */
  KGS_ERR_INTERNAL = 7
} kgs_status;

/* Resolved run configuration. */
typedef struct kgs_config kgs_config;
/* Outcome of one experiment: the report tree and the artifact list. */
typedef struct kgs_result kgs_result;

KGS_API const char* kgs_version(void);

/* Message of the last failed call on this thread ("" when none). */
KGS_API const char* kgs_last_error(void);

/* Number of experiments and their names. */
KGS_API size_t kgs_experiment_count(void);
KGS_API const char* kgs_experiment_name(size_t index);

/* Default configuration of an experiment as JSON. Free with kgs_string_free. */
KGS_API kgs_status kgs_default_config(const char* experiment, char** json_out);
KGS_API void kgs_string_free(char* s);

/* Parse and validate a config for `experiment`. */
KGS_API kgs_status kgs_config_from_file(const char* experiment, const char* path, kgs_config** out);
KGS_API kgs_status kgs_config_from_string(const char* experiment, const char* json_text, kgs_config** out);
KGS_API kgs_status kgs_config_set_output_dir(kgs_config* cfg, const char* dir);
/* Resolved config as JSON; owned by the handle. */
KGS_API const char* kgs_config_json(const kgs_config* cfg);
KGS_API void kgs_config_free(kgs_config* cfg);

/* Runs the configured experiment and writes its artifacts. A numerical
 * failure still yields KGS_OK with a failed result; the report names the
 * invariant that broke. */
KGS_API kgs_status kgs_run(const kgs_config* cfg, kgs_result** out);
KGS_API int kgs_result_passed(const kgs_result* r);
/* report.json contents; owned by the handle. */
KGS_API const char* kgs_result_report(const kgs_result* r);
/* Human-readable digest of the checks; owned by the handle. */
KGS_API const char* kgs_result_summary(const kgs_result* r);
KGS_API size_t kgs_result_artifact_count(const kgs_result* r);
KGS_API const char* kgs_result_artifact(const kgs_result* r, size_t index);
KGS_API void kgs_result_free(kgs_result* r);

#ifdef __cplusplus
}
#endif

#endif
