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

// abelrate: group-code rates, Theta tables and ensemble checks from the
// command line.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abelrate/abelrate.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerification = 4;

int ExitCode(ar_status status) {
  switch (status) {
    case AR_OK:
      return kExitOk;
    case AR_ERR_INVALID_INPUT:
    case AR_ERR_UNSUPPORTED:
    case AR_ERR_LIMIT:
      return kExitInput;
    case AR_ERR_SOLVER:
      return kExitSolver;
    case AR_ERR_VERIFICATION:
      return kExitVerification;
    default:
      return kExitInternal;
  }
}

int Fail(ar_status status) {
  std::cerr << "error: " << ar_last_error() << '\n';
  return ExitCode(status);
}

struct CString {
  char* ptr = nullptr;
  ~CString() { ar_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct ProblemDeleter {
  void operator()(ar_problem* p) const { ar_problem_free(p); }
};
struct ResultDeleter {
  void operator()(ar_rate_result* r) const { ar_rate_result_free(r); }
};
struct GroupDeleter {
  void operator()(ar_group* g) const { ar_group_free(g); }
};

std::string Num(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  char buf[64];
  double x = v.get<double>();
  if (x == 0.0) x = 0.0;
  std::snprintf(buf, sizeof(buf), "%.9f", x);
  return buf;
}

std::string Theta(const Json& theta) {
  std::string out = "(";
  for (std::size_t i = 0; i < theta.size(); ++i) out += (i ? "," : "") + std::to_string(theta[i].get<unsigned>());
  return out + ")";
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::vector<double> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) throw CLI::ValidationError("--w", "'" + token + "' is not a number");
    out.push_back(v);
  }
  return out;
}

void PrintRate(const Json& r) {
  const std::string units = r["units"].get<std::string>();
  std::cout << Pad("command", 10) << r["command"].get<std::string>() << '\n';
  std::cout << Pad("group", 10) << r["group"].get<std::string>() << '\n';
  std::cout << Pad("sense", 10) << r["sense"].get<std::string>() << '\n';
  std::cout << Pad("value", 10) << Num(r["value"]) << ' ' << units << '\n';
  std::cout << Pad("support", 10) << r["support"].get<std::string>() << '\n';
  std::cout << Pad("w", 10);
  bool first = true;
  for (const auto& [key, value] : r["optimal_w"].items()) {
    std::cout << (first ? "" : " ") << key << '=' << Num(value);
    first = false;
  }
  std::cout << '\n' << Pad("critical", 10);
  first = true;
  for (const auto& theta : r["critical_thetas"]) {
    std::cout << (first ? "" : " ") << Theta(theta);
    first = false;
  }
  std::cout << '\n';
  if (!r["diagnostic"].get<std::string>().empty()) {
    std::cout << Pad("note", 10) << r["diagnostic"].get<std::string>() << '\n';
  }
  std::cout << '\n' << Pad("theta", 14) << Pad("omega", 14) << Pad("info", 14) << "ratio\n";
  for (const auto& t : r["terms"]) {
    std::cout << Pad(Theta(t["theta"]), 14) << Pad(Num(t["omega"]), 14) << Pad(Num(t["info"]), 14)
              << Num(t["ratio"]) << '\n';
  }
  if (r.contains("closed_form")) {
    const auto& c = r["closed_form"];
    std::cout << "\nclosed form " << c["name"].get<std::string>() << ": " << Num(c["value"]) << ' ' << units
              << " (solver - closed form = " << Num(c["gap"]) << ")\n";
  }
  if (r.contains("grid_check")) {
    const auto& g = r["grid_check"];
    std::cout << "\ngrid 1/" << g["steps"].get<unsigned>() << ": " << Num(g["value"]) << ' ' << units
              << " over " << g["points"].get<std::uint64_t>() << " points (solver advantage " << Num(g["gap"])
              << ")\n";
  }
  if (r.contains("search")) {
    const auto& s = r["search"];
    std::cout << "\nsearch (not certified): " << Num(s["value"]) << ' ' << units << " at E[d] = "
              << Num(s["expected_distortion"]) << " after " << s["evaluations"].get<std::uint64_t>()
              << " evaluations\n";
  }
  if (r.contains("timing_ms")) std::cout << "\ntime " << r["timing_ms"].get<double>() << " ms\n";
}

void PrintGroupInfo(const Json& g) {
  std::string input;
  for (const auto& v : g["input"]) input += (input.empty() ? "" : ",") + std::to_string(v.get<std::uint64_t>());
  std::cout << Pad("input", 11) << input << '\n';
  std::cout << Pad("canonical", 11) << g["canonical"].get<std::string>() << '\n';
  std::cout << Pad("order", 11) << g["order"].get<std::uint64_t>() << '\n';
  std::cout << Pad("rings", 11);
  bool first = true;
  for (const auto& r : g["rings"]) {
    std::cout << (first ? "" : " ") << '(' << r["p"].get<unsigned>() << ',' << r["r"].get<unsigned>() << ','
              << r["m"].get<unsigned>() << ')';
    first = false;
  }
  auto pairs = [](const Json& list) {
    std::string s;
    for (const auto& pp : list) {
      s += (s.empty() ? "" : " ") + std::string("(") + std::to_string(pp[0].get<unsigned>()) + "," +
           std::to_string(pp[1].get<unsigned>()) + ")";
    }
    return s;
  };
  std::cout << '\n' << Pad("S", 11) << pairs(g["S"]) << '\n';
  std::cout << Pad("Q", 11) << pairs(g["Q"]) << '\n';
  std::cout << Pad("r_q", 11);
  first = true;
  for (const auto& [p, r] : g["r_q"].items()) {
    std::cout << (first ? "" : " ") << p << ':' << r.get<unsigned>();
    first = false;
  }
  std::cout << '\n' << Pad("field", 11) << (g["is_field"].get<bool>() ? "yes" : "no") << '\n';
}

void PrintThetaTable(const Json& t) {
  std::cout << Pad("group", 13) << t["group"].get<std::string>() << '\n';
  std::cout << Pad("support", 13) << t["support"].get<std::string>() << '\n';
  std::cout << Pad("denominator", 13) << t["denominator"].get<std::string>() << '\n';
  const bool has_w = t.contains("w");
  std::cout << '\n' << Pad("theta", 14) << (has_w ? Pad("omega", 14) : "") << "numerator\n";
  for (const auto& row : t["rows"]) {
    std::cout << Pad(Theta(row["theta"]), 14) << (has_w ? Pad(Num(row["omega"]), 14) : "")
              << row["numerator"].get<std::string>() << '\n';
  }
}

void PrintEnsemble(const Json& e) {
  std::cout << Pad("config", 8) << e["config"].get<std::string>() << " n=" << e["n"].get<std::size_t>() << "\n\n";
  std::cout << Pad("check", 22) << Pad("method", 34) << Pad("checked", 10) << "violations\n";
  for (const auto& c : e["checks"]) {
    std::cout << Pad(c["name"].get<std::string>(), 22) << Pad(c["method"].get<std::string>(), 34)
              << Pad(std::to_string(c["checked"].get<std::uint64_t>()), 10) << c["violations"].get<std::uint64_t>();
    if (!c["detail"].get<std::string>().empty()) std::cout << "  " << c["detail"].get<std::string>();
    std::cout << '\n';
  }
  std::cout << '\n' << Pad("result", 8) << (e["passed"].get<bool>() ? "PASS" : "FAIL") << '\n';
}

void PrintSimulation(const Json& s) {
  std::cout << Pad("group", 11) << s["group"].get<std::string>() << '\n';
  std::cout << Pad("code", 11) << s["config"].get<std::string>() << " n=" << s["n"].get<std::size_t>() << '\n';
  std::cout << Pad("rate", 11) << Num(s["code_rate_bits"]) << " bits/symbol\n";
  std::cout << Pad("trials", 11) << s["trials"].get<std::uint64_t>() << '\n';
  std::cout << Pad("errors", 11) << s["errors"].get<std::uint64_t>() << '\n';
  std::cout << Pad("error rate", 11) << Num(s["rate"]) << " +/- " << Num(s["std_error"]) << '\n';
}

void Emit(const std::string& json_text, bool as_json, void (*printer)(const Json&)) {
  if (as_json) {
    std::cout << json_text << '\n';
  } else {
    printer(Json::parse(json_text));
  }
}

struct Common {
  bool json = false;
  bool nats = false;
  bool timing = false;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
};

struct RateArgs {
  std::string file;
  bool closed_form = false;
  unsigned grid = 0;
  std::string csv;
  bool search = false;
  unsigned restarts = 3;
  unsigned proposals = 200;
};

int RunRate(const Common& common, const RateArgs& args, bool channel) {
  ar_problem* raw = nullptr;
  if (auto s = ar_problem_load_file(args.file.c_str(), &raw); s != AR_OK) return Fail(s);
  std::unique_ptr<ar_problem, ProblemDeleter> problem(raw);
  ar_options options;
  ar_options_init(&options);
  options.tolerance = common.tolerance;
  options.closed_form = args.closed_form;
  options.grid_steps = args.grid;
  options.nats = common.nats;
  options.timing = common.timing;
  options.seed = common.seed;
  options.search = args.search;
  options.search_restarts = args.restarts;
  options.search_proposals = args.proposals;
  ar_rate_result* result_raw = nullptr;
  const auto status = channel ? ar_capacity(problem.get(), &options, &result_raw)
                              : ar_rate_distortion(problem.get(), &options, &result_raw);
  if (status != AR_OK) return Fail(status);
  std::unique_ptr<ar_rate_result, ResultDeleter> result(result_raw);
  CString json;
  if (auto s = ar_rate_result_to_json(result.get(), &json.ptr); s != AR_OK) return Fail(s);
  if (!args.csv.empty()) {
    CString csv;
    if (auto s = ar_rate_result_terms_csv(result.get(), &csv.ptr); s != AR_OK) return Fail(s);
    std::ofstream out(args.csv, std::ios::binary);
    out << csv.str();
    if (!out) {
      std::cerr << "error: cannot write '" << args.csv << "'\n";
      return kExitInput;
    }
  }
  Emit(json.str(), common.json, PrintRate);
  return kExitOk;
}

void AddRateOptions(CLI::App* cmd, RateArgs& args) {
  cmd->add_option("file", args.file, "Problem file (JSON)")->required();
  cmd->add_flag("--closed-form", args.closed_form, "Cross-check against the closed form when one exists");
  cmd->add_option("--grid-check", args.grid, "Also run a grid search over w with step 1/N")
      ->check(CLI::Range(1u, 100000u));
  cmd->add_option("--csv", args.csv, "Write the per-theta table as CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rates of Abelian group codes: channel and source functionals, Theta tables, ensemble checks"};
  app.set_version_flag("--version", std::string(ar_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_flag("--json", common.json, "Print the JSON record instead of text");
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--tolerance", common.tolerance, "Bisection tolerance in bits")->check(CLI::PositiveNumber);
  app.add_flag("--nats", common.nats, "Report rates in nats");
  app.add_flag("--timing", common.timing, "Include wall time in the record");

  std::string group_text;
  auto* group_info = app.add_subcommand("group-info", "Canonical decomposition of a finite Abelian group");
  group_info->add_option("group", group_text, "Cyclic orders, e.g. 4,3,9,9")->required();

  RateArgs capacity_args;
  auto* capacity = app.add_subcommand("capacity", "Channel functional of a channel problem");
  AddRateOptions(capacity, capacity_args);

  RateArgs rd_args;
  auto* rd = app.add_subcommand("rd", "Source functional of a source problem");
  AddRateOptions(rd, rd_args);
  rd->add_flag("--search", rd_args.search, "Heuristic search over test channels (not certified)");
  rd->add_option("--restarts", rd_args.restarts, "Search restarts")->check(CLI::Range(1u, 1000u));
  rd->add_option("--proposals", rd_args.proposals, "Search proposals per restart")->check(CLI::Range(1u, 100000u));

  std::string theta_group, support, weights;
  auto* theta = app.add_subcommand("theta-table", "Theta(w) and omega coefficients for a support");
  theta->add_option("group", theta_group, "Cyclic orders")->required();
  theta->add_option("--support", support, "Supported (q,s) pairs, e.g. 2:2,2:3");
  theta->add_option("--w", weights, "Weights over S(G), e.g. 0,0.4,0.6");

  std::string ens_group, counts;
  std::size_t n = 1;
  std::uint64_t tables = 100, samples = 0, trials = 1000;
  auto* verify = app.add_subcommand("verify-ensemble", "Exact checks of the random homomorphism ensemble");
  verify->add_option("group", ens_group, "Cyclic orders")->required();
  verify->add_option("--k", counts, "Counts k_{q,s} over S(G), e.g. 0,1")->required();
  verify->add_option("--n", n, "Blocklength")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  verify->add_option("--tables", tables, "Sampled tables for the homomorphism checks");
  verify->add_option("--samples", samples, "Samples for the statistical pair-law check (0: off)");

  std::string sim_file;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ML block-error rate of the code ensemble");
  simulate->add_option("file", sim_file, "Channel problem file")->required();
  simulate->add_option("--k", counts, "Counts k_{q,s} over S(G)")->required();
  simulate->add_option("--n", n, "Blocklength")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  simulate->add_option("--trials", trials, "Number of trials")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*group_info) {
    ar_group* raw = nullptr;
    if (auto s = ar_group_parse(group_text.c_str(), &raw); s != AR_OK) return Fail(s);
    std::unique_ptr<ar_group, GroupDeleter> g(raw);
    CString json;
    if (auto s = ar_group_info_json(g.get(), &json.ptr); s != AR_OK) return Fail(s);
    Emit(json.str(), common.json, PrintGroupInfo);
    return kExitOk;
  }
  if (*capacity) return RunRate(common, capacity_args, true);
  if (*rd) return RunRate(common, rd_args, false);
  if (*theta) {
    std::vector<double> w;
    try {
      if (!weights.empty()) w = ParseDoubles(weights);
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    }
    CString json;
    const auto s = ar_theta_table_json(theta_group.c_str(), support.empty() ? nullptr : support.c_str(),
                                       weights.empty() ? nullptr : w.data(), w.size(), &json.ptr);
    if (s != AR_OK) return Fail(s);
    Emit(json.str(), common.json, PrintThetaTable);
    return kExitOk;
  }
  if (*verify) {
    ar_ensemble_options options;
    ar_ensemble_options_init(&options);
    options.tables = tables;
    options.samples = samples;
    options.seed = common.seed;
    CString json;
    int passed = 0;
    const auto s = ar_verify_ensemble(ens_group.c_str(), counts.c_str(), n, &options, &json.ptr, &passed);
    if (json.ptr != nullptr) Emit(json.str(), common.json, PrintEnsemble);
    if (s != AR_OK) return Fail(s);
    return kExitOk;
  }
  if (*simulate) {
    ar_problem* raw = nullptr;
    if (auto s = ar_problem_load_file(sim_file.c_str(), &raw); s != AR_OK) return Fail(s);
    std::unique_ptr<ar_problem, ProblemDeleter> problem(raw);
    CString json;
    if (auto s = ar_simulate(problem.get(), counts.c_str(), n, trials, common.seed, &json.ptr); s != AR_OK) {
      return Fail(s);
    }
    Emit(json.str(), common.json, PrintSimulation);
    return kExitOk;
  }
  return kExitInternal;
}
