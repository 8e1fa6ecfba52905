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

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "abelrate/abelrate.h"

static int failures = 0;

#define EXPECT(cond)                                                        \
  do {                                                                      \
    if (!(cond)) {                                                          \
      fprintf(stderr, "%s:%d: expected %s (last error: %s)\n", __FILE__, \
              __LINE__, #cond, ar_last_error());                            \
      ++failures;                                                           \
    }                                                                       \
  } while (0)

static char data_dir[1024];

static const char* DataPath(const char* name) {
  static char path[2048];
  snprintf(path, sizeof path, "%s/%s", data_dir, name);
  return path;
}

static void TestGroups(void) {
  ar_group* g = NULL;
  EXPECT(ar_group_parse("4,3,9,9", &g) == AR_OK);
  EXPECT(ar_group_order(g) == 972);
  EXPECT(ar_group_num_rings(g) == 4);
  uint32_t p = 0, r = 0, m = 0;
  EXPECT(ar_group_ring(g, 0, &p, &r, &m) == AR_OK && p == 2 && r == 2 && m == 1);
  EXPECT(ar_group_ring(g, 3, &p, &r, &m) == AR_OK && p == 3 && r == 2 && m == 2);
  EXPECT(ar_group_ring(g, 4, &p, &r, &m) == AR_ERR_INVALID_INPUT);

  char* json = NULL;
  EXPECT(ar_group_info_json(g, &json) == AR_OK && strstr(json, "\"order\"") != NULL);
  ar_string_free(json);
  ar_group_free(g);

  /* Z_6 = Z_2 + Z_3: user coordinate 5 is (1, 2). */
  EXPECT(ar_group_parse("6", &g) == AR_OK);
  uint64_t user[1] = {5}, canon[2] = {0, 0};
  EXPECT(ar_group_to_canonical(g, user, 1, canon, 2) == AR_OK && canon[0] == 1 && canon[1] == 2);
  EXPECT(ar_group_to_canonical(g, user, 1, canon, 1) == AR_ERR_INVALID_INPUT);
  ar_group_free(g);

  g = NULL;
  EXPECT(ar_group_parse("1", &g) == AR_ERR_INVALID_INPUT && g == NULL);
  EXPECT(strlen(ar_last_error()) > 0);
  EXPECT(ar_group_parse("4,x", &g) == AR_ERR_INVALID_INPUT);
}

static void TestCapacity(void) {
  ar_problem* prob = NULL;
  EXPECT(ar_problem_load_file(DataPath("z4_identity.json"), &prob) == AR_OK);
  EXPECT(ar_problem_kind_of(prob) == AR_PROBLEM_CHANNEL);
  ar_options opt;
  ar_options_init(&opt);
  opt.closed_form = 1;
  ar_rate_result* res = NULL;
  EXPECT(ar_capacity(prob, &opt, &res) == AR_OK);
  EXPECT(fabs(ar_rate_result_value(res) - 2.0) < 1e-9);
  size_t nw = ar_rate_result_num_weights(res);
  EXPECT(nw == 2);
  double w[2] = {0, 0};
  EXPECT(ar_rate_result_weights(res, w, 2) == AR_OK && fabs(w[0] + w[1] - 1.0) < 1e-12);
  EXPECT(ar_rate_result_weights(res, w, 1) == AR_ERR_INVALID_INPUT);
  char* text = NULL;
  EXPECT(ar_rate_result_to_json(res, &text) == AR_OK && strstr(text, "\"closed_form\"") != NULL);
  ar_string_free(text);
  EXPECT(ar_rate_result_terms_csv(res, &text) == AR_OK && strncmp(text, "theta_", 6) == 0);
  ar_string_free(text);
  ar_rate_result_free(res);

  res = NULL;
  EXPECT(ar_rate_distortion(prob, &opt, &res) == AR_ERR_UNSUPPORTED && res == NULL);
  ar_problem_free(prob);

  opt.nats = 1;
  EXPECT(ar_problem_load_file(DataPath("z4_merged_pair.json"), &prob) == AR_OK);
  EXPECT(ar_capacity(prob, &opt, &res) == AR_OK);
  EXPECT(fabs(ar_rate_result_value(res) - log(2.0)) < 1e-9);
  ar_rate_result_free(res);
  ar_problem_free(prob);

  prob = NULL;
  EXPECT(ar_problem_load_file(DataPath("missing.json"), &prob) == AR_ERR_INVALID_INPUT && prob == NULL);
  EXPECT(ar_problem_parse_json("{\"kind\": \"channel\", \"group\": \"2\", \"matrix\": [[1, 0], [0.5, 0.6]]}",
                               &prob) == AR_ERR_INVALID_INPUT);
  EXPECT(ar_problem_parse_json("{\"kind\": \"channel\", \"group\": \"2\", \"extra\": 1, \"matrix\": [[1, 0], [0, 1]]}",
                               &prob) == AR_ERR_INVALID_INPUT);
}

static void TestRoundTrip(void) {
  const char* names[] = {"z2_bsc0.json", "z2z4_channel.json", "z4_source.json", "z8_additive.json"};
  for (size_t i = 0; i < sizeof names / sizeof names[0]; ++i) {
    ar_problem* a = NULL;
    ar_problem* b = NULL;
    char* first = NULL;
    char* second = NULL;
    EXPECT(ar_problem_load_file(DataPath(names[i]), &a) == AR_OK);
    EXPECT(ar_problem_to_json(a, &first) == AR_OK);
    EXPECT(ar_problem_parse_json(first, &b) == AR_OK);
    EXPECT(ar_problem_to_json(b, &second) == AR_OK);
    EXPECT(first && second && strcmp(first, second) == 0);
    ar_string_free(first);
    ar_string_free(second);
    ar_problem_free(a);
    ar_problem_free(b);
  }
}

static void TestSource(void) {
  ar_problem* prob = NULL;
  EXPECT(ar_problem_load_file(DataPath("z4_source.json"), &prob) == AR_OK);
  EXPECT(ar_problem_kind_of(prob) == AR_PROBLEM_SOURCE);
  ar_options opt;
  ar_options_init(&opt);
  opt.closed_form = 1;
  opt.grid_steps = 50;
  ar_rate_result* res = NULL;
  EXPECT(ar_rate_distortion(prob, &opt, &res) == AR_OK);
  EXPECT(fabs(ar_rate_result_value(res) - 1.078071905) < 1e-8);
  ar_rate_result_free(res);
  ar_problem_free(prob);
}

static void TestThetaTable(void) {
  char* json = NULL;
  const double w[3] = {0.0, 0.4, 0.6};
  EXPECT(ar_theta_table_json("8", "2:2,2:3", w, 3, &json) == AR_OK);
  EXPECT(json && strstr(json, "0.2") != NULL);
  ar_string_free(json);
  EXPECT(ar_theta_table_json("8", "2:2,2:3", w, 2, &json) == AR_ERR_INVALID_INPUT);
  EXPECT(ar_theta_table_json("8", "3:1", NULL, 0, &json) == AR_ERR_INVALID_INPUT);
}

static void TestEnsemble(void) {
  ar_ensemble_options opt;
  ar_ensemble_options_init(&opt);
  opt.samples = 2000;
  char* json = NULL;
  int passed = 0;
  EXPECT(ar_verify_ensemble("4", "0,1", 2, &opt, &json, &passed) == AR_OK && passed == 1);
  ar_string_free(json);
  EXPECT(ar_verify_ensemble("4", "0,0,1", 1, &opt, &json, &passed) == AR_ERR_INVALID_INPUT);

  ar_problem* prob = NULL;
  EXPECT(ar_problem_load_file(DataPath("z8_additive.json"), &prob) == AR_OK);
  char* first = NULL;
  char* second = NULL;
  EXPECT(ar_simulate(prob, "0,0,1", 2, 300, 9, &first) == AR_OK);
  EXPECT(ar_simulate(prob, "0,0,1", 2, 300, 9, &second) == AR_OK);
  EXPECT(first && second && strcmp(first, second) == 0);
  ar_string_free(first);
  ar_string_free(second);
  ar_problem_free(prob);
}

int main(int argc, char** argv) {
  if (argc != 2) {
    fprintf(stderr, "usage: capi_test <test data dir>\n");
    return 2;
  }
  snprintf(data_dir, sizeof data_dir, "%s", argv[1]);
  EXPECT(ar_version() != NULL && strlen(ar_version()) > 0);
  TestGroups();
  TestCapacity();
  TestRoundTrip();
  TestSource();
  TestThetaTable();
  TestEnsemble();
  if (failures == 0) printf("capi_test: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
