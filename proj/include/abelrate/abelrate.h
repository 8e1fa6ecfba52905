// Copyright 2026 The abelrate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to abelrate.
 *
 * Every function that can fail returns an ar_status; on failure the message
 * is available from ar_last_error() on the calling thread. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * ar_string_free(). Handles are released with their matching *_free().
 */

#ifndef ABELRATE_ABELRATE_H_
#define ABELRATE_ABELRATE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AR_API __declspec(dllexport)
#else
#define AR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ar_status {
  AR_OK = 0,
  AR_ERR_INVALID_INPUT = 2,
  AR_ERR_SOLVER = 3,
  AR_ERR_VERIFICATION = 4,
  AR_ERR_UNSUPPORTED = 5,
  AR_ERR_LIMIT = 6,
  AR_ERR_INTERNAL = 7
} ar_status;

typedef enum ar_problem_kind { AR_PROBLEM_CHANNEL = 0, AR_PROBLEM_SOURCE = 1 } ar_problem_kind;

typedef struct ar_group ar_group;
typedef struct ar_problem ar_problem;
typedef struct ar_rate_result ar_rate_result;

AR_API const char* ar_version(void);
AR_API const char* ar_last_error(void);
AR_API void ar_string_free(char* s);

/* Groups, from a list of cyclic orders such as "4,3,9,9". */
AR_API ar_status ar_group_parse(const char* orders, ar_group** out);
AR_API void ar_group_free(ar_group* g);
AR_API uint64_t ar_group_order(const ar_group* g);
AR_API size_t ar_group_num_rings(const ar_group* g);
AR_API ar_status ar_group_ring(const ar_group* g, size_t index, uint32_t* p, uint32_t* r, uint32_t* m);
AR_API ar_status ar_group_info_json(const ar_group* g, char** out_json);
/* Maps user coordinates (one per cyclic factor) to canonical residues. */
AR_API ar_status ar_group_to_canonical(const ar_group* g, const uint64_t* user, size_t user_len,
                                       uint64_t* out, size_t out_len);

/* Problem files. */
AR_API ar_status ar_problem_load_file(const char* path, ar_problem** out);
AR_API ar_status ar_problem_parse_json(const char* text, ar_problem** out);
AR_API ar_status ar_problem_to_json(const ar_problem* p, char** out_json);
AR_API ar_problem_kind ar_problem_kind_of(const ar_problem* p);
AR_API void ar_problem_free(ar_problem* p);

typedef struct ar_options {
  double tolerance;          /* bisection tolerance in bits */
  int max_iterations;        /* per-support bisection cap */
  int closed_form;           /* nonzero: add and cross-check the closed form when one exists */
  unsigned grid_steps;       /* nonzero: add a grid search with step 1/grid_steps */
  int nats;                  /* nonzero: report in nats */
  int timing;                /* nonzero: include wall time in records */
  uint64_t seed;             /* test-channel search seed */
  int search;                /* rd only: run the heuristic test-channel search */
  unsigned search_restarts;
  unsigned search_proposals;
} ar_options;

AR_API void ar_options_init(ar_options* options);

/* Channel functional of a channel problem; source functional of a source problem. */
AR_API ar_status ar_capacity(const ar_problem* p, const ar_options* options, ar_rate_result** out);
AR_API ar_status ar_rate_distortion(const ar_problem* p, const ar_options* options, ar_rate_result** out);

/* In bits, or nats when the options asked for nats; +inf when unbounded. */
AR_API double ar_rate_result_value(const ar_rate_result* r);
AR_API size_t ar_rate_result_num_weights(const ar_rate_result* r);
AR_API ar_status ar_rate_result_weights(const ar_rate_result* r, double* out, size_t out_len);
AR_API ar_status ar_rate_result_to_json(const ar_rate_result* r, char** out_json);
AR_API ar_status ar_rate_result_terms_csv(const ar_rate_result* r, char** out_csv);
AR_API void ar_rate_result_free(ar_rate_result* r);

/* Theta(support) with omega coefficients. `support` ("2:2,2:3") and `w` may
 * be NULL; with neither, the full support is used. */
AR_API ar_status ar_theta_table_json(const char* group, const char* support, const double* w, size_t w_len,
                                     char** out_json);

typedef struct ar_ensemble_options {
  uint64_t tables;  /* sampled tables for the image and homomorphism checks */
  uint64_t samples; /* sampled pairwise-law checks; 0 disables */
  uint64_t seed;
} ar_ensemble_options;

AR_API void ar_ensemble_options_init(ar_ensemble_options* options);

/* Runs the ensemble checks for J given by counts over S(G) ("0,1,1").
 * Returns AR_ERR_VERIFICATION, with the report still written, when a check fails. */
AR_API ar_status ar_verify_ensemble(const char* group, const char* counts, size_t n,
                                    const ar_ensemble_options* options, char** out_json, int* all_passed);

/* Monte Carlo block-error rate of ML decoding over the channel in `p`. */
AR_API ar_status ar_simulate(const ar_problem* p, const char* counts, size_t n, uint64_t trials, uint64_t seed,
                             char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* ABELRATE_ABELRATE_H_ */
