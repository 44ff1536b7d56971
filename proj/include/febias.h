/* Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* febias — feature-level demographic bias evaluation for classifier
 * embedding spaces and prediction logs, with a permutation-test statistical
 * module.
 *
 * All functions return FEBIAS_OK on success; on failure they return an
 * error code and leave a human-readable message in febias_last_error()
 * (thread-local). Out-parameters are untouched on failure. Every handle
 * has a matching *_free; freeing NULL is a no-op.
 */

#ifndef FEBIAS_H
#define FEBIAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FEBIAS_API __declspec(dllexport)
#else
#define FEBIAS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum febias_status {
  FEBIAS_OK = 0,
  FEBIAS_ERROR_IO = 1,
  FEBIAS_ERROR_PARSE = 2,
  FEBIAS_ERROR_VALIDATION = 3,
  FEBIAS_ERROR_STAT = 4,
  FEBIAS_ERROR_INVALID_ARGUMENT = 5,
  FEBIAS_ERROR_INTERNAL = 6
} febias_status;

typedef struct febias_embeddings febias_embeddings;
typedef struct febias_predictions febias_predictions;
typedef struct febias_namelist febias_namelist;
typedef struct febias_schema febias_schema;
typedef struct febias_findings febias_findings;

FEBIAS_API const char* febias_version(void);
FEBIAS_API const char* febias_last_error(void);

/* ---- statistical configuration ------------------------------------- */

typedef struct febias_perm_config {
  uint64_t permutations;    /* B; default 10000 */
  double alpha;             /* significance threshold; default 0.05 */
  uint64_t seed;            /* master seed; all randomness derives from it */
  uint64_t exact_threshold; /* exact enumeration below this many assignments */
  int estimator;            /* 0 = published estimator, 1 = add-one */
  int threads;              /* worker threads; 0 = hardware concurrency */
} febias_perm_config;

FEBIAS_API void febias_perm_config_defaults(febias_perm_config* cfg);

/* ---- name lists and schemas ----------------------------------------- */

/* One name per line, '#' comments, order significant (argmax ties break
 * toward earlier names). */
FEBIAS_API febias_status febias_namelist_load(const char* path,
                                              febias_namelist** out);
FEBIAS_API febias_status febias_namelist_create(const char* const* names,
                                                size_t count,
                                                febias_namelist** out);
FEBIAS_API size_t febias_namelist_count(const febias_namelist* list);
FEBIAS_API const char* febias_namelist_name(const febias_namelist* list,
                                            size_t index);
FEBIAS_API void febias_namelist_free(febias_namelist* list);

FEBIAS_API febias_status febias_schema_create(const char* attribute_name,
                                              const febias_namelist* groups,
                                              febias_schema** out);
FEBIAS_API void febias_schema_free(febias_schema* schema);

/* ---- datasets -------------------------------------------------------- */

#define FEBIAS_FORMAT_AUTO 0
#define FEBIAS_FORMAT_BINARY 1
#define FEBIAS_FORMAT_CSV 2

FEBIAS_API febias_status febias_embeddings_load(const char* path, int format,
                                                febias_embeddings** out);
FEBIAS_API febias_status febias_embeddings_write(const febias_embeddings* set,
                                                 const char* path, int format);
/* Removes samples listed (one id per line) in `id_list_path`. */
FEBIAS_API febias_status febias_embeddings_exclude(febias_embeddings* set,
                                                   const char* id_list_path,
                                                   size_t* removed);
FEBIAS_API size_t febias_embeddings_count(const febias_embeddings* set);
FEBIAS_API size_t febias_embeddings_dim(const febias_embeddings* set);
FEBIAS_API void febias_embeddings_free(febias_embeddings* set);

FEBIAS_API febias_status febias_predictions_load(
    const char* path, const febias_namelist* class_vocabulary,
    febias_predictions** out);
FEBIAS_API febias_status febias_predictions_exclude(febias_predictions* set,
                                                    const char* id_list_path,
                                                    size_t* removed);
FEBIAS_API size_t febias_predictions_count(const febias_predictions* set);
FEBIAS_API void febias_predictions_free(febias_predictions* set);

/* ---- bias evaluation suites ------------------------------------------ */

/* Differential associations in the feature space: test-set expression
 * embeddings vs probe-group embeddings. The test embeddings must carry an
 * "expression" label; the probe embeddings a label named like the schema. */
FEBIAS_API febias_status febias_run_dia(const febias_embeddings* test_set,
                                        const febias_embeddings* probe_set,
                                        const febias_namelist* expressions,
                                        const febias_schema* schema,
                                        const febias_perm_config* cfg,
                                        febias_findings** out);

/* Performance disparities (difference in Equal Opportunity) from a
 * prediction log. min_stratum_size == 0 makes empty strata hard errors;
 * k >= 1 drops strata below k and records them. */
FEBIAS_API febias_status febias_run_dip(const febias_predictions* predictions,
                                        const febias_namelist* expressions,
                                        const febias_schema* schema,
                                        const febias_perm_config* cfg,
                                        uint32_t min_stratum_size,
                                        febias_findings** out);

/* ---- findings -------------------------------------------------------- */

FEBIAS_API febias_status febias_findings_load_json(const char* path,
                                                   febias_findings** out);
FEBIAS_API febias_status febias_findings_write_json(const febias_findings* f,
                                                    const char* path,
                                                    const char* manifest_digest);
FEBIAS_API febias_status febias_findings_write_csv(const febias_findings* f,
                                                   const char* path,
                                                   const char* manifest_digest);
FEBIAS_API size_t febias_findings_count(const febias_findings* f);
FEBIAS_API size_t febias_findings_tests_run(const febias_findings* f);
FEBIAS_API void febias_findings_free(febias_findings* f);

/* ---- comparison and aggregation -------------------------------------- */

/* Per-expression L1 agreement against ground truth
 * ("expression,l1_percent,reference_match"; NaN on reference mismatch). */
FEBIAS_API febias_status febias_compare_write_csv(const febias_findings* method,
                                                  const febias_findings* truth,
                                                  const char* path,
                                                  const char* manifest_digest);

/* AvgBias over one or more findings sets (one per attribute). `truth` may
 * be NULL; when given, reference-mismatched entries are excluded. */
FEBIAS_API febias_status febias_avg_bias(const febias_findings* const* sets,
                                         size_t count,
                                         const febias_findings* truth_or_null,
                                         double* value, uint64_t* included,
                                         uint64_t* excluded);

/* Re-thresholds cached (observed, p) pairs over the alpha grid and writes
 * "alpha,avg_bias_percent". */
FEBIAS_API febias_status febias_alpha_sweep_write_csv(
    const febias_findings* const* sets, size_t count,
    const febias_findings* truth_or_null, const double* alphas,
    size_t alpha_count, const char* path, const char* manifest_digest);

/* AvgBias per named run ("run,avg_bias_percent"). */
FEBIAS_API febias_status febias_multi_run_write_csv(
    const char* const* run_names, const febias_findings* const* runs,
    size_t count, const char* path, const char* manifest_digest);

/* Markdown report over one or more findings sets. */
FEBIAS_API febias_status febias_report_write_markdown(
    const febias_findings* const* sets, size_t count, const char* path);

/* ---- synthetic scenarios --------------------------------------------- */

typedef struct febias_synth_config {
  uint32_t dim;
  uint32_t n_expressions;
  uint32_t n_groups;
  uint32_t test_per_expression;
  uint32_t probe_per_group;
  uint32_t predictions_per_cell;
  double tilt;
  double noise_scale;
  double base_accuracy;
  double accuracy_boost;
  uint32_t tilted_group;
  uint32_t target_expression;
  uint64_t seed;
  int null_scenario; /* nonzero: one shared probe distribution, no tilt */
} febias_synth_config;

FEBIAS_API void febias_synth_config_defaults(febias_synth_config* cfg);

/* Writes test_embeddings.febe, probe_embeddings.febe, predictions.csv,
 * expressions.txt and group.txt into out_dir. */
FEBIAS_API febias_status febias_synth_generate(const febias_synth_config* cfg,
                                               const char* out_dir);

/* ---- digests ---------------------------------------------------------- */

/* SHA-256 as lowercase hex; hex_out must hold 65 bytes. */
FEBIAS_API febias_status febias_file_sha256(const char* path, char* hex_out);
FEBIAS_API febias_status febias_buffer_sha256(const void* data, size_t len,
                                              char* hex_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FEBIAS_H */
