/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libagreesim.
 *
 * Objects are opaque handles created by *_load / *_learn / *_run style
 * functions and released with the matching *_free. Every fallible call
 * returns an agreesim_status; on failure the message is available from
 * agreesim_last_error() on the same thread until the next failing call.
 * Strings returned through char** out-parameters are owned by the caller
 * and must be released with agreesim_string_free().
 */

#ifndef AGREESIM_AGREESIM_H_
#define AGREESIM_AGREESIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(AGREESIM_BUILDING_LIBRARY)
#define AGREESIM_API __declspec(dllexport)
#else
#define AGREESIM_API __declspec(dllimport)
#endif
#else
#define AGREESIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum agreesim_status {
  AGREESIM_OK = 0,
  AGREESIM_ERR_INVALID_ARGUMENT = 1, /* null handle, bad enum value */
  AGREESIM_ERR_PARSE = 2,            /* malformed input text */
  AGREESIM_ERR_VALIDATION = 3,       /* input violates a data invariant */
  AGREESIM_ERR_CONFIG = 4,           /* inconsistent options */
  AGREESIM_ERR_UNDEFINED = 5,        /* statistic undefined for the input */
  AGREESIM_ERR_IO = 6,
  AGREESIM_ERR_INTERNAL = 7
} agreesim_status;

typedef enum agreesim_flip_space {
  AGREESIM_FLIP_BINARY = 0, /* flip between positive/negative representatives */
  AGREESIM_FLIP_ORDINAL = 1 /* flip to one of the other scheme labels */
} agreesim_flip_space;

typedef enum agreesim_verdict {
  AGREESIM_BELOW_BAND = 0,
  AGREESIM_WITHIN_BAND = 1,
  AGREESIM_ABOVE_BAND = 2
} agreesim_verdict;

typedef struct agreesim_dataset agreesim_dataset;
typedef struct agreesim_matrix agreesim_matrix;
typedef struct agreesim_report agreesim_report;
typedef struct agreesim_suite agreesim_suite;

AGREESIM_API const char* agreesim_version(void);
AGREESIM_API const char* agreesim_status_name(agreesim_status status);
AGREESIM_API const char* agreesim_last_error(void);
AGREESIM_API void agreesim_string_free(char* str);

/* Writes `size` bytes to `path` through a temporary file, so the target is
 * either fully written or untouched. */
AGREESIM_API agreesim_status agreesim_write_file(const char* path,
                                                 const char* data,
                                                 size_t size);

/* ---- datasets ---------------------------------------------------------- */

typedef struct agreesim_load_options {
  const char* format;      /* "jsonl", "tabular"; NULL infers from the path */
  const char* scheme_path; /* sidecar scheme file, or NULL */
  const char* scheme_json; /* inline scheme JSON, or NULL */
  char delimiter;          /* tabular separator; 0 picks tab or comma */
} agreesim_load_options;

AGREESIM_API agreesim_status agreesim_dataset_load_file(
    const char* path, const agreesim_load_options* options,
    agreesim_dataset** out);
AGREESIM_API agreesim_status agreesim_dataset_load_buffer(
    const char* data, size_t size, const agreesim_load_options* options,
    agreesim_dataset** out);
AGREESIM_API void agreesim_dataset_free(agreesim_dataset* dataset);
AGREESIM_API size_t agreesim_dataset_size(const agreesim_dataset* dataset);
AGREESIM_API agreesim_status agreesim_dataset_to_jsonl(
    const agreesim_dataset* dataset, char** out);
AGREESIM_API agreesim_status agreesim_agreement(
    const agreesim_dataset* dataset, double* out);

/* ---- conflation matrices ------------------------------------------------ */

AGREESIM_API agreesim_status agreesim_matrix_learn(
    const agreesim_dataset* dataset, double smoothing, agreesim_matrix** out);
/* Reference counts for the four-level controversy scheme. */
AGREESIM_API agreesim_status agreesim_matrix_controversy_reference(
    agreesim_matrix** out);
AGREESIM_API agreesim_status agreesim_matrix_load_file(const char* path,
                                                       agreesim_matrix** out);
AGREESIM_API agreesim_status agreesim_matrix_from_json(const char* json,
                                                       agreesim_matrix** out);
AGREESIM_API void agreesim_matrix_free(agreesim_matrix* matrix);
AGREESIM_API agreesim_status agreesim_matrix_to_json(
    const agreesim_matrix* matrix, char** out);
AGREESIM_API agreesim_status agreesim_matrix_format_table(
    const agreesim_matrix* matrix, char** out);
AGREESIM_API agreesim_status agreesim_matrix_agreement(
    const agreesim_matrix* matrix, double* out);
/* Row distribution of label `value`; `probs` must hold `capacity` doubles
 * and receives one entry per scheme label, ascending by value. `*written`
 * is set to the label count even when `capacity` is too small. */
AGREESIM_API agreesim_status agreesim_matrix_row_distribution(
    const agreesim_matrix* matrix, int value, double* probs, size_t capacity,
    size_t* written);

/* ---- simulation --------------------------------------------------------- */

typedef struct agreesim_sim_options {
  const char* system_model;  /* model spec text, e.g. "sample" */
  const char* truth_model;   /* model spec text, e.g. "average" */
  const char* metric;        /* NULL means "auc" */
  uint64_t n_trials;
  uint64_t seed;
  const double* percentiles; /* NULL means {5, 50, 95} */
  size_t n_percentiles;
  agreesim_flip_space flip_space;
  unsigned jobs;             /* worker threads; 0 = hardware concurrency */
} agreesim_sim_options;

/* Defaults: sample vs average, auc, 10000 trials, seed 0, 1 job. */
AGREESIM_API void agreesim_sim_options_init(agreesim_sim_options* options);

/* `matrix` may be NULL unless a model uses conflation. */
AGREESIM_API agreesim_status agreesim_simulate(
    const agreesim_dataset* dataset, const agreesim_matrix* matrix,
    const agreesim_sim_options* options, agreesim_report** out);
AGREESIM_API void agreesim_report_free(agreesim_report* report);
AGREESIM_API agreesim_status agreesim_report_to_json(
    const agreesim_report* report, char** out);
AGREESIM_API agreesim_status agreesim_report_summary(
    const agreesim_report* report, char** out);
AGREESIM_API agreesim_status agreesim_report_samples_text(
    const agreesim_report* report, char** out);
AGREESIM_API agreesim_status agreesim_report_percentile(
    const agreesim_report* report, double q, double* out);
AGREESIM_API double agreesim_report_mean(const agreesim_report* report);
AGREESIM_API uint64_t agreesim_report_n_valid(const agreesim_report* report);
AGREESIM_API uint64_t
agreesim_report_n_undefined(const agreesim_report* report);
/* Borrowed view of the ascending valid samples. */
AGREESIM_API const double* agreesim_report_samples(
    const agreesim_report* report, size_t* count);

/* Runs a named preset ("table2") with `defaults` supplying metric, trials,
 * seed, percentiles, flip space and jobs. */
AGREESIM_API agreesim_status agreesim_suite_run_preset(
    const agreesim_dataset* dataset, const agreesim_matrix* matrix,
    const char* preset, const agreesim_sim_options* defaults,
    agreesim_suite** out);
/* Runs the configs listed in a suite config JSON document. */
AGREESIM_API agreesim_status agreesim_suite_run_config(
    const agreesim_dataset* dataset, const agreesim_matrix* matrix,
    const char* config_json, const agreesim_sim_options* defaults,
    agreesim_suite** out);
AGREESIM_API void agreesim_suite_free(agreesim_suite* suite);
AGREESIM_API size_t agreesim_suite_size(const agreesim_suite* suite);
AGREESIM_API size_t agreesim_suite_failed(const agreesim_suite* suite);
/* NULL when entry `index` failed. Borrowed from the suite. */
AGREESIM_API const agreesim_report* agreesim_suite_report(
    const agreesim_suite* suite, size_t index);
/* NULL when entry `index` succeeded. Borrowed from the suite. */
AGREESIM_API const char* agreesim_suite_error(const agreesim_suite* suite,
                                              size_t index);
AGREESIM_API agreesim_status agreesim_suite_to_json(
    const agreesim_suite* suite, char** out);
AGREESIM_API agreesim_status agreesim_suite_markdown(
    const agreesim_suite* suite, char** out);

/* ---- statistics --------------------------------------------------------- */

AGREESIM_API agreesim_status agreesim_percentile(const double* samples,
                                                 size_t count, double q,
                                                 double* out);
AGREESIM_API agreesim_status agreesim_assess(double score,
                                             const double* samples,
                                             size_t count, double low,
                                             double high,
                                             double* percentile_rank,
                                             agreesim_verdict* verdict);
AGREESIM_API const char* agreesim_verdict_name(agreesim_verdict verdict);
/* Reads a samples dump; release `*samples` with agreesim_samples_free. */
AGREESIM_API agreesim_status agreesim_samples_load_file(const char* path,
                                                        double** samples,
                                                        size_t* count);
AGREESIM_API void agreesim_samples_free(double* samples);

/* Evaluates a registered metric. `truth` holds 0/1 bytes; `scheme_json`
 * may be NULL for the controversy scheme. */
AGREESIM_API agreesim_status agreesim_metric(const char* name,
                                             const uint8_t* truth,
                                             const double* scores,
                                             size_t count,
                                             const char* scheme_json,
                                             double* out);

/* ---- synthetic data ----------------------------------------------------- */

typedef struct agreesim_synth_options {
  size_t n_docs;
  /* Annotator count distribution; NULL counts mean a constant 3. NULL
   * weights with non-NULL counts mean uniform weights. */
  const int* annotator_counts;
  const double* annotator_weights;
  size_t n_annotator_options;
  /* Calibrated mode when non-NULL; the scheme is the matrix's. */
  const agreesim_matrix* matrix;
  /* Dirichlet mode when `matrix` is NULL: one alpha per label, ascending
   * label order. */
  const double* alpha;
  size_t n_alpha;
  const char* scheme_json; /* dirichlet scheme; NULL = controversy */
  uint64_t seed;
} agreesim_synth_options;

/* Defaults: 343 documents, 3 annotators each, seed 0, no mode selected. */
AGREESIM_API void agreesim_synth_options_init(agreesim_synth_options* options);
AGREESIM_API agreesim_status agreesim_synth_generate(
    const agreesim_synth_options* options, agreesim_dataset** out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* AGREESIM_AGREESIM_H_ */
