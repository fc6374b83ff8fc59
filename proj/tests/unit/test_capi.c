#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "kgs/kgs.h"

static int failures = 0;

#define EXPECT(cond)                                                    \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                       \
    }                                                                   \
  } while (0)

static const char* kSmallRun =
    "{\"grid\": {\"L\": 10.0, \"N\": 64},"
    " \"time\": {\"T\": 0.2, \"dt\": 0.01},"
    " \"output\": {\"csv_stride\": 4}}";

int main(int argc, char** argv) {
  const char* out_dir = argc > 1 ? argv[1] : "capi_out";
  kgs_config* cfg = NULL;
  kgs_result* res = NULL;
  char* text = NULL;

  EXPECT(strlen(kgs_version()) > 0);
  EXPECT(kgs_experiment_count() == 8);
  EXPECT(kgs_experiment_name(kgs_experiment_count()) == NULL);

  /* null arguments */
  EXPECT(kgs_config_from_string("local-solve", NULL, &cfg) == KGS_ERR_ARGUMENT);
  EXPECT(kgs_config_from_string("local-solve", "{}", NULL) == KGS_ERR_ARGUMENT);
  EXPECT(kgs_run(NULL, &res) == KGS_ERR_ARGUMENT);
  EXPECT(kgs_default_config("local-solve", NULL) == KGS_ERR_ARGUMENT);
  EXPECT(kgs_result_passed(NULL) == 0);
  EXPECT(kgs_result_report(NULL) == NULL);
  kgs_config_free(NULL);
  kgs_result_free(NULL);

  /* invalid configurations */
  EXPECT(kgs_config_from_string("local-solve", "{\"grid\": {\"N\": 63}}", &cfg) == KGS_ERR_CONFIG);
  EXPECT(cfg == NULL);
  EXPECT(strstr(kgs_last_error(), "N") != NULL);
  EXPECT(kgs_config_from_string("local-solve", "{not json", &cfg) == KGS_ERR_CONFIG);
  EXPECT(kgs_config_from_string("nonsense", "{}", &cfg) == KGS_ERR_CONFIG);
  EXPECT(kgs_config_from_file("local-solve", "/nonexistent/config.json", &cfg) == KGS_ERR_CONFIG);

  /* defaults */
  EXPECT(kgs_default_config("global-solve", &text) == KGS_OK);
  EXPECT(text != NULL && strstr(text, "\"grid\"") != NULL);
  kgs_string_free(text);

  /* a small linear run */
  EXPECT(kgs_config_from_string("linear-kg-check", kSmallRun, &cfg) == KGS_OK);
  EXPECT(cfg != NULL);
  if (cfg) {
    EXPECT(strstr(kgs_config_json(cfg), "\"N\": 64") != NULL || strstr(kgs_config_json(cfg), "\"N\":64") != NULL);
    EXPECT(kgs_config_set_output_dir(cfg, out_dir) == KGS_OK);
    EXPECT(kgs_config_set_output_dir(cfg, NULL) == KGS_ERR_ARGUMENT);
    EXPECT(kgs_run(cfg, &res) == KGS_OK);
    EXPECT(res != NULL);
    if (res) {
      EXPECT(kgs_result_passed(res) == 1);
      EXPECT(strstr(kgs_result_report(res), "\"experiment\": \"linear-kg-check\"") != NULL);
      EXPECT(strlen(kgs_result_summary(res)) > 0);
      EXPECT(kgs_result_artifact_count(res) >= 2);
      EXPECT(kgs_result_artifact(res, kgs_result_artifact_count(res)) == NULL);
      if (!kgs_result_passed(res)) fputs(kgs_result_summary(res), stderr);
    }
    kgs_result_free(res);
    kgs_config_free(cfg);
  }

  if (failures) fprintf(stderr, "%d failures\n", failures);
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
