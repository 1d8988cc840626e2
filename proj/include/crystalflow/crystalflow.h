#ifndef CRYSTALFLOW_CRYSTALFLOW_H
#define CRYSTALFLOW_CRYSTALFLOW_H

/*
 * C interface to the crystalflow solver: smallness functions and thresholds,
 * configured runs with decay certification, the property suite and sweeps.
 *
 * Every function returning cf_status reports failure through the status and
 * leaves a message retrievable with cf_last_error() on the calling thread.
 * Output pointers are written only on CF_OK, except where noted.
 */

#include <stddef.h>

#if defined(CRYSTALFLOW_BUILDING_LIBRARY)
#define CF_API __attribute__((visibility("default")))
#else
#define CF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERROR_CONFIG = 1,
  CF_ERROR_INADMISSIBLE = 2,
  CF_ERROR_SINGULAR = 3,
  CF_ERROR_INVALID_ARGUMENT = 4,
  CF_ERROR_IO = 5,
  CF_ERROR_STEP_LIMIT = 6,
  CF_ERROR_OVERFLOW = 7,
  CF_ERROR_INTERNAL = 99
} cf_status;

typedef enum cf_model { CF_MODEL_EXP = 0, CF_MODEL_ADL = 1 } cf_model;

typedef enum cf_run_status {
  CF_RUN_COMPLETED = 0,
  CF_RUN_REFUSED = 1,
  CF_RUN_SINGULAR = 2
} cf_run_status;

typedef struct cf_threshold_result {
  double root;
  double lower; /* delta(lower) > 0 */
  double upper; /* delta(upper) < 0 */
  int iterations;
} cf_threshold_result;

typedef struct cf_sample {
  double t;
  double wiener0, wiener1, wiener2, wiener4;
  double l2;
  double sobolev0, sobolev1, sobolev1_9, sobolev2;
  double linf;
  double lyapunov;
  double min_one_plus_v;
  double u_min, u_max;
} cf_sample;

typedef struct cf_run_summary {
  cf_run_status status;
  double x0;
  double delta; /* NaN outside the formula's domain */
  int admissible;
  int has_certificate;
  int verdict;
  double fitted_rate;        /* +inf when no sample is above the fit floor */
  double first_failure_time; /* NaN when the envelope holds */
  int lyapunov_monotone;
  int wiener_monotone;
  int positivity_ok;
  double hr_rate[3]; /* r = 0, 1, 1.9 */
  long long steps;
  double final_time;
  double failure_time; /* NaN unless singular */
  size_t n_samples;
  size_t n_warnings;
} cf_run_summary;

typedef struct cf_run cf_run;

CF_API const char* cf_version(void);
CF_API const char* cf_status_message(cf_status status);
/* Message of the last failure on this thread; "" if none. */
CF_API const char* cf_last_error(void);

CF_API cf_status cf_delta(cf_model model, double x, double* out);
CF_API cf_status cf_threshold(cf_model model, cf_threshold_result* out);

CF_API cf_status cf_run_create_from_file(const char* path, cf_run** out);
/* base_dir resolves relative file paths inside the config; NULL means ".". */
CF_API cf_status cf_run_create_from_json(const char* json, const char* base_dir, cf_run** out);
CF_API void cf_run_destroy(cf_run* run);

CF_API cf_status cf_run_initial_norm(const cf_run* run, double* out);
/* Rescales the initial data so that its Wiener norm equals x0. */
CF_API cf_status cf_run_set_initial_norm(cf_run* run, double x0);
CF_API cf_status cf_run_set_output_directory(cf_run* run, const char* directory);
/* Copies the normalised config as JSON; *needed receives the size including NUL. */
CF_API cf_status cf_run_serialize_config(const cf_run* run, char* buffer, size_t capacity,
                                         size_t* needed);

/*
 * Integrates and certifies. Returns CF_ERROR_INADMISSIBLE when strict is set
 * and delta <= 0 (nothing is integrated), CF_ERROR_SINGULAR when the Adl
 * positivity guard trips. In both cases the summary remains available.
 */
CF_API cf_status cf_run_execute(cf_run* run, int strict);
/* Writes the output bundle of the last execution to the output directory. */
CF_API cf_status cf_run_write_outputs(const cf_run* run);
CF_API cf_status cf_run_get_summary(const cf_run* run, cf_run_summary* out);
CF_API cf_status cf_run_get_sample(const cf_run* run, size_t index, cf_sample* out);
/* The string lives as long as the run's current report. */
CF_API cf_status cf_run_get_warning(const cf_run* run, size_t index, const char** out);

typedef void (*cf_check_callback)(const char* family, const char* name, int pass,
                                  int informational, const char* detail, void* user);

/* filter and fault may be NULL. *n_failed excludes informational checks. */
CF_API cf_status cf_validate(const char* filter, const char* fault, cf_check_callback callback,
                             void* user, int* n_checks, int* n_failed);

typedef struct cf_sweep_row {
  double x0;
  double delta;
  int admissible;
  double fitted_rate;
  int verdict;
  cf_run_status status;
} cf_sweep_row;

typedef void (*cf_sweep_callback)(const cf_sweep_row* row, void* user);

/*
 * Runs the sweep described by the config file. workers <= 0 keeps the
 * configured count; out_dir may be NULL. Rows arrive in ascending x0 after
 * every run has finished.
 */
CF_API cf_status cf_sweep_execute(const char* path, int workers, int strict, const char* out_dir,
                                  cf_sweep_callback callback, void* user);

#ifdef __cplusplus
}
#endif

#endif
