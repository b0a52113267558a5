/* include/lcmeval/lcmeval.h
 *
 * Copyright 2026 The lcmeval Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the lcmeval library.
 *
 * Every fallible call returns an lcm_status; on failure the message is
 * available from lcm_last_error() on the calling thread until the next call
 * into the library. Handles are opaque and owned by the caller.
 */

#ifndef LCMEVAL_LCMEVAL_H_
#define LCMEVAL_LCMEVAL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LCMEVAL_BUILDING_LIBRARY)
#define LCM_API __attribute__((visibility("default")))
#else
#define LCM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lcm_status {
  LCM_OK = 0,
  LCM_INVALID_ARGUMENT = 1,
  LCM_MISSING_FILE = 2,
  LCM_IO_ERROR = 3,
  LCM_PARSE_ERROR = 4,
  LCM_UNRESOLVED_REFERENCE = 5,
  LCM_UNKNOWN_SEGMENT = 6,
  LCM_NON_FINITE_SCORE = 7,
  LCM_DUPLICATE_CELL = 8,
  LCM_EMPTY_CORPUS = 9,
  LCM_ZERO_LENGTH_HYPOTHESIS_CORPUS = 10,
  LCM_EMPTY_SET = 11,
  LCM_NOT_ENOUGH_SEGMENTS = 12,
  LCM_ZERO_VARIANCE = 13,
  LCM_MISSING_KEY = 14,
  LCM_INSUFFICIENT_OVERLAP = 15,
  LCM_NO_PAIRABLE_UNITS = 16,
  LCM_INCOMPLETE_TABLE = 17,
  LCM_LENGTH_MISMATCH = 18,
  LCM_ALL_TIED = 19,
  LCM_TOO_FEW_SYSTEMS = 20,
  LCM_SYSTEM_ONLY_TABLE = 21,
  LCM_NO_VARIANTS = 22,
  LCM_DEGENERATE_CORRELATION = 23,
  LCM_SAMPLE_TOO_SMALL = 24,
  LCM_CELL_MISMATCH = 25,
  LCM_ALIGNMENT_MISMATCH = 26,
  LCM_UNSUPPORTED_FORMAT = 27,
  LCM_INTERNAL = 100
} lcm_status;

typedef struct lcm_campaign lcm_campaign;
typedef struct lcm_options lcm_options;

LCM_API const char* lcm_version(void);
LCM_API const char* lcm_last_error(void);
LCM_API const char* lcm_status_name(lcm_status status);

/* 0 success, 1 validation failure, 2 I/O error, 3 statistical precondition. */
LCM_API int lcm_exit_code(lcm_status status);

/* Strings returned through char** belong to the caller. */
LCM_API void lcm_string_free(char* text);

LCM_API lcm_status lcm_campaign_load(const char* config_path, lcm_campaign** out);
LCM_API void lcm_campaign_free(lcm_campaign* campaign);

/* *ok is 1 when no rating cell is missing or duplicated. */
LCM_API lcm_status lcm_campaign_validate(const lcm_campaign* campaign, int* ok, long long* expected_ratings,
                                         long long* found_ratings, char** report);
LCM_API lcm_status lcm_campaign_trap_count(const lcm_campaign* campaign, long long* count);

/* Writes a canonical copy of the campaign; *config_path receives its path. */
LCM_API lcm_status lcm_campaign_ingest(const lcm_campaign* campaign, const char* out_dir, char** config_path);

LCM_API lcm_status lcm_options_new(lcm_options** out);
LCM_API void lcm_options_free(lcm_options* options);
LCM_API lcm_status lcm_options_set_seed(lcm_options* options, uint64_t seed);
LCM_API lcm_status lcm_options_set_hybrids(lcm_options* options, size_t count);
LCM_API lcm_status lcm_options_set_permutations(lcm_options* options, size_t count);
LCM_API lcm_status lcm_options_set_bootstrap(lcm_options* options, size_t count);
LCM_API lcm_status lcm_options_set_alpha(lcm_options* options, double alpha);
LCM_API lcm_status lcm_options_set_timing_cutoff(lcm_options* options, double seconds);
LCM_API lcm_status lcm_options_set_include_traps(lcm_options* options, int include);
LCM_API lcm_status lcm_options_set_agreement_scale(lcm_options* options, const char* scale); /* raw, z */
LCM_API lcm_status lcm_options_set_length_unit(lcm_options* options, const char* unit);
LCM_API lcm_status lcm_options_set_level(lcm_options* options, const char* level); /* system, segment */
LCM_API lcm_status lcm_options_set_sig_format(lcm_options* options, const char* format);
LCM_API lcm_status lcm_options_set_threads(lcm_options* options, unsigned threads);

/* Runs one stage ("validate", "traps", "qc", "normalize", "score",
 * "correlate", "significance", "syscompare" or "run") and writes its report
 * files plus manifest.tsv into out_dir. options may be NULL. */
LCM_API lcm_status lcm_run_stage(const lcm_campaign* campaign, const char* stage, const lcm_options* options,
                                 const char* out_dir);

/* Re-renders a significance matrix CSV as csv, textgrid or svg. */
LCM_API lcm_status lcm_emit_sig_matrix(const char* csv_path, const char* format, const char* out_path);

LCM_API lcm_status lcm_pearson(const double* x, const double* y, size_t n, double* r);
LCM_API lcm_status lcm_kendall_tau_b(const double* x, const double* y, size_t n, double* tau);
LCM_API lcm_status lcm_zou_ci(double r12, double r13, double r23, size_t n, double level, double* lower,
                              double* upper);
LCM_API lcm_status lcm_paired_bootstrap(const double* seg_a, size_t n_a, const double* seg_b, size_t n_b,
                                        size_t iterations, uint64_t seed, unsigned threads, double* p);
LCM_API lcm_status lcm_length_deviation(const long long* output_len, const long long* expect_len, size_t n,
                                        double* deviation);

/* scheme is "character" or "whitespace". */
LCM_API lcm_status lcm_corpus_bleu(const char* const* hypotheses, const char* const* references, size_t n,
                                   const char* scheme, double* bleu, double* bleu_star);

#ifdef __cplusplus
}
#endif

#endif /* LCMEVAL_LCMEVAL_H_ */
