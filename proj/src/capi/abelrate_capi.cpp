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

#include "abelrate/abelrate.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/ensemble.hpp"
#include "core/group.hpp"
#include "core/io.hpp"
#include "core/rates.hpp"
#include "core/rd_search.hpp"

struct ar_group {
  abelrate::Decomposition decomposition;
};

struct ar_problem {
  abelrate::ProblemFile file;
};

struct ar_rate_result {
  abelrate::RateReport report;
  abelrate::OutputOptions output;
};

namespace {

using abelrate::InvalidInput;

thread_local std::string last_error;

struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
ar_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return AR_OK;
  } catch (const abelrate::InvalidInput& e) {
    last_error = e.what();
    return AR_ERR_INVALID_INPUT;
  } catch (const abelrate::GroupMismatch& e) {
    last_error = e.what();
    return AR_ERR_INVALID_INPUT;
  } catch (const abelrate::LimitExceeded& e) {
    last_error = e.what();
    return AR_ERR_LIMIT;
  } catch (const abelrate::SolverError& e) {
    last_error = std::string("solver: ") + e.what();
    return AR_ERR_SOLVER;
  } catch (const VerificationFailed& e) {
    last_error = e.what();
    return AR_ERR_VERIFICATION;
  } catch (const Unsupported& e) {
    last_error = e.what();
    return AR_ERR_UNSUPPORTED;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return AR_ERR_LIMIT;
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return AR_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return AR_ERR_INTERNAL;
  }
}

void Require(const void* ptr, const char* name) {
  if (ptr == nullptr) throw InvalidInput(std::string(name) + " must not be NULL");
}

char* CopyString(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

abelrate::SolverOptions ToSolverOptions(const ar_options& o) {
  abelrate::SolverOptions s;
  s.tolerance = o.tolerance;
  s.max_iterations = o.max_iterations;
  if (!(s.tolerance > 0.0) || s.max_iterations <= 0) throw InvalidInput("tolerance and iteration cap must be positive");
  return s;
}

void CrossCheckClosedForm(abelrate::RateReport& report, const abelrate::TermTable& terms) {
  report.closed_form = abelrate::ClosedFormValue(*report.group, terms, report.sense);
  if (!report.closed_form) return;
  const double v = report.result.value, c = report.closed_form->value;
  if (std::isinf(v) && std::isinf(c)) return;
  if (std::abs(v - c) > 1e-8 * std::max(1.0, std::abs(c))) {
    throw abelrate::SolverError("solver value " + abelrate::FormatNumber(v) + " disagrees with the " +
                                report.closed_form->name + " closed form " + abelrate::FormatNumber(c));
  }
}

ar_rate_result* Solve(const ar_problem* p, const ar_options* options, bool channel) {
  Require(p, "problem");
  ar_options o;
  ar_options_init(&o);
  if (options != nullptr) o = *options;
  const auto start = std::chrono::steady_clock::now();
  auto out = std::make_unique<ar_rate_result>();
  auto& report = out->report;
  const auto& file = p->file;
  report.group = file.group;
  report.group_orders = file.group_orders;
  out->output.nats = o.nats != 0;
  abelrate::TermTable terms;
  if (channel) {
    if (file.kind != abelrate::ProblemKind::kChannel) throw Unsupported("capacity needs a channel problem");
    report.command = "capacity";
    report.sense = abelrate::Sense::kChannel;
    terms = abelrate::ChannelTerms(*file.channel);
  } else {
    if (file.kind != abelrate::ProblemKind::kSource) throw Unsupported("rd needs a source problem");
    report.command = "rd";
    report.sense = abelrate::Sense::kSource;
    terms = abelrate::SourceTerms(*file.source);
  }
  report.result = abelrate::SolveMinimax(*report.group, terms, report.sense, ToSolverOptions(o));
  if (o.closed_form) CrossCheckClosedForm(report, terms);
  if (o.grid_steps > 0) {
    report.grid = abelrate::GridSearch(*report.group, terms, report.sense, o.grid_steps);
    report.grid_steps = o.grid_steps;
  }
  if (!channel && o.search) {
    abelrate::RdSearchOptions so;
    so.seed = o.seed;
    so.restarts = o.search_restarts;
    so.proposals = o.search_proposals;
    so.solver = ToSolverOptions(o);
    report.search = abelrate::SearchTestChannel(*file.source, so);
  }
  if (o.timing) {
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return out.release();
}

}  // namespace

extern "C" {

const char* ar_version(void) { return "0.1.0"; }

const char* ar_last_error(void) { return last_error.c_str(); }

void ar_string_free(char* s) { std::free(s); }

ar_status ar_group_parse(const char* orders, ar_group** out) {
  return Guard([&] {
    Require(orders, "orders");
    Require(out, "out");
    *out = nullptr;
    *out = new ar_group{abelrate::DecomposeString(orders)};
  });
}

void ar_group_free(ar_group* g) { delete g; }

uint64_t ar_group_order(const ar_group* g) { return g ? g->decomposition.group()->order() : 0; }

size_t ar_group_num_rings(const ar_group* g) { return g ? g->decomposition.group()->num_rings() : 0; }

ar_status ar_group_ring(const ar_group* g, size_t index, uint32_t* p, uint32_t* r, uint32_t* m) {
  return Guard([&] {
    Require(g, "group");
    const auto& rings = g->decomposition.group()->rings();
    if (index >= rings.size()) throw InvalidInput("ring index out of range");
    if (p) *p = rings[index].p;
    if (r) *r = rings[index].r;
    if (m) *m = rings[index].m;
  });
}

ar_status ar_group_info_json(const ar_group* g, char** out_json) {
  return Guard([&] {
    Require(g, "group");
    Require(out_json, "out_json");
    *out_json = CopyString(abelrate::GroupInfoJson(g->decomposition).dump(2));
  });
}

ar_status ar_group_to_canonical(const ar_group* g, const uint64_t* user, size_t user_len, uint64_t* out,
                                size_t out_len) {
  return Guard([&] {
    Require(g, "group");
    Require(user, "user");
    Require(out, "out");
    const auto canon = g->decomposition.ToCanonical(std::span<const std::uint64_t>(user, user_len));
    if (out_len < canon.size()) throw InvalidInput("output buffer too small");
    std::copy(canon.begin(), canon.end(), out);
  });
}

ar_status ar_problem_load_file(const char* path, ar_problem** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = nullptr;
    *out = new ar_problem{abelrate::LoadProblem(path)};
  });
}

ar_status ar_problem_parse_json(const char* text, ar_problem** out) {
  return Guard([&] {
    Require(text, "text");
    Require(out, "out");
    *out = nullptr;
    *out = new ar_problem{abelrate::ParseProblem(text)};
  });
}

ar_status ar_problem_to_json(const ar_problem* p, char** out_json) {
  return Guard([&] {
    Require(p, "problem");
    Require(out_json, "out_json");
    *out_json = CopyString(abelrate::SerializeProblem(p->file));
  });
}

ar_problem_kind ar_problem_kind_of(const ar_problem* p) {
  return p && p->file.kind == abelrate::ProblemKind::kSource ? AR_PROBLEM_SOURCE : AR_PROBLEM_CHANNEL;
}

void ar_problem_free(ar_problem* p) { delete p; }

void ar_options_init(ar_options* options) {
  if (options == nullptr) return;
  *options = ar_options{};
  options->tolerance = 1e-9;
  options->max_iterations = 200;
  options->search_restarts = 3;
  options->search_proposals = 200;
}

ar_status ar_capacity(const ar_problem* p, const ar_options* options, ar_rate_result** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    *out = Solve(p, options, true);
  });
}

ar_status ar_rate_distortion(const ar_problem* p, const ar_options* options, ar_rate_result** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    *out = Solve(p, options, false);
  });
}

double ar_rate_result_value(const ar_rate_result* r) {
  if (!r) return 0.0;
  return r->output.nats ? r->report.result.value * std::log(2.0) : r->report.result.value;
}

size_t ar_rate_result_num_weights(const ar_rate_result* r) { return r ? r->report.result.optimal_w.size() : 0; }

ar_status ar_rate_result_weights(const ar_rate_result* r, double* out, size_t out_len) {
  return Guard([&] {
    Require(r, "result");
    Require(out, "out");
    const auto& w = r->report.result.optimal_w;
    if (out_len < w.size()) throw InvalidInput("output buffer too small");
    std::copy(w.begin(), w.end(), out);
  });
}

ar_status ar_rate_result_to_json(const ar_rate_result* r, char** out_json) {
  return Guard([&] {
    Require(r, "result");
    Require(out_json, "out_json");
    *out_json = CopyString(abelrate::ToJson(r->report, r->output).dump(2));
  });
}

ar_status ar_rate_result_terms_csv(const ar_rate_result* r, char** out_csv) {
  return Guard([&] {
    Require(r, "result");
    Require(out_csv, "out_csv");
    *out_csv = CopyString(abelrate::TermsCsv(r->report));
  });
}

void ar_rate_result_free(ar_rate_result* r) { delete r; }

ar_status ar_theta_table_json(const char* group, const char* support, const double* w, size_t w_len,
                              char** out_json) {
  return Guard([&] {
    Require(group, "group");
    Require(out_json, "out_json");
    const auto g = abelrate::DecomposeString(group).group();
    std::optional<std::vector<double>> weights;
    if (w != nullptr) weights.emplace(w, w + w_len);
    abelrate::SupportMask mask = abelrate::FullSupport(*g);
    if (support != nullptr) {
      mask = abelrate::ParseSupport(*g, support);
      if (weights && abelrate::SupportOf(*g, *weights) != mask) {
        throw InvalidInput("weights are positive exactly on " +
                           abelrate::SupportToString(*g, abelrate::SupportOf(*g, *weights)) +
                           ", not on the given support");
      }
    } else if (weights) {
      mask = abelrate::SupportOf(*g, *weights);
    }
    *out_json = CopyString(abelrate::ThetaTableJson(*g, mask, weights).dump(2));
  });
}

void ar_ensemble_options_init(ar_ensemble_options* options) {
  if (options == nullptr) return;
  options->tables = 100;
  options->samples = 0;
  options->seed = 0;
}

ar_status ar_verify_ensemble(const char* group, const char* counts, size_t n, const ar_ensemble_options* options,
                             char** out_json, int* all_passed) {
  return Guard([&] {
    Require(group, "group");
    Require(counts, "counts");
    Require(out_json, "out_json");
    *out_json = nullptr;
    ar_ensemble_options o;
    ar_ensemble_options_init(&o);
    if (options != nullptr) o = *options;
    const auto g = abelrate::DecomposeString(group).group();
    const abelrate::JSpec j(g, abelrate::ParseCounts(*g, counts));
    abelrate::EnsembleOptions eo;
    eo.tables = o.tables;
    eo.samples = o.samples;
    eo.seed = o.seed;
    const auto report = abelrate::VerifyEnsemble(j, n, eo);
    *out_json = CopyString(abelrate::ToJson(report).dump(2));
    if (all_passed) *all_passed = report.passed() ? 1 : 0;
    if (!report.passed()) {
      for (const auto& c : report.checks) {
        if (c.violations > 0) throw VerificationFailed("check '" + c.name + "' failed: " + c.detail);
      }
    }
  });
}

ar_status ar_simulate(const ar_problem* p, const char* counts, size_t n, uint64_t trials, uint64_t seed,
                      char** out_json) {
  return Guard([&] {
    Require(p, "problem");
    Require(counts, "counts");
    Require(out_json, "out_json");
    if (p->file.kind != abelrate::ProblemKind::kChannel) throw Unsupported("simulate needs a channel problem");
    const abelrate::JSpec j(p->file.group, abelrate::ParseCounts(*p->file.group, counts));
    const auto result = abelrate::McChannelError(j, n, *p->file.channel, trials, seed);
    abelrate::Json doc;
    doc["command"] = "simulate";
    doc["group"] = p->file.group->ToString();
    doc["config"] = j.ToString();
    doc["n"] = n;
    doc["seed"] = seed;
    doc["code_rate_bits"] = abelrate::Number(std::log2(static_cast<double>(j.size())) / static_cast<double>(n));
    const auto stats = abelrate::ToJson(result);
    for (const auto& [key, value] : stats.items()) doc[key] = value;
    *out_json = CopyString(doc.dump(2));
  });
}

}  // extern "C"
