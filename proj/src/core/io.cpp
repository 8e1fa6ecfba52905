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

#include "core/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace abelrate {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double ParseDecimal(const std::string& text) {
  if (text.empty()) throw InvalidInput("empty probability string");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidInput("'" + text + "' is not a number");
  }
  if (used != text.size()) throw InvalidInput("'" + text + "' is not a number");
  return v;
}

Matrix ParseMatrix(const Json& value, const std::string& name, std::size_t rows, std::size_t cols) {
  if (!value.is_array()) throw InvalidInput("'" + name + "' must be an array of rows");
  if (value.size() != rows) {
    throw InvalidInput("'" + name + "' has " + std::to_string(value.size()) + " rows, expected " +
                       std::to_string(rows));
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = value[i];
    if (!row.is_array() || row.size() != cols) {
      throw InvalidInput("'" + name + "' row " + std::to_string(i) + " must have " + std::to_string(cols) +
                         " entries");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      try {
        m(i, k) = ParseProbability(row[k]);
      } catch (const InvalidInput& e) {
        throw InvalidInput("'" + name + "'[" + std::to_string(i) + "][" + std::to_string(k) + "]: " + e.what());
      }
    }
  }
  return m;
}

std::size_t ParseSize(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw InvalidInput(std::string("missing '") + key + "'");
  const auto& v = doc.at(key);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
    throw InvalidInput(std::string("'") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::uint64_t> ParseGroupField(const Json& v) {
  if (v.is_string()) return ParseCyclicOrders(v.get<std::string>());
  if (v.is_array()) {
    std::vector<std::uint64_t> out;
    for (const auto& x : v) {
      if (!x.is_number_unsigned()) throw InvalidInput("'group' entries must be positive integers");
      out.push_back(x.get<std::uint64_t>());
    }
    return out;
  }
  if (v.is_number_unsigned()) return {v.get<std::uint64_t>()};
  throw InvalidInput("'group' must be a list of cyclic orders or a string like \"4,3\"");
}

Json MatrixJson(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (double v : m.row(i)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json RoundedMatrixJson(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (double v : m.row(i)) row.push_back(Number(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string SlotKey(const PrimePower& pp) { return std::to_string(pp.p) + ":" + std::to_string(pp.e); }

Json WeightsJson(const GroupSpec& g, const std::vector<double>& w) {
  Json out = Json::object();
  for (std::size_t i = 0; i < w.size(); ++i) out[SlotKey(g.s_index()[i])] = Number(w[i]);
  return out;
}

Json ThetaJson(const ThetaVector& theta) {
  Json out = Json::array();
  for (auto t : theta) out.push_back(t);
  return out;
}

}  // namespace

double ParseProbability(const Json& value) {
  double v = 0.0;
  if (value.is_number()) {
    v = value.get<double>();
  } else if (value.is_string()) {
    const auto text = value.get<std::string>();
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      v = ParseDecimal(text);
    } else {
      const double den = ParseDecimal(text.substr(slash + 1));
      if (den == 0.0) throw InvalidInput("'" + text + "' has a zero denominator");
      v = ParseDecimal(text.substr(0, slash)) / den;
    }
  } else {
    throw InvalidInput("probability must be a number or a string");
  }
  if (!std::isfinite(v)) throw InvalidInput("probability is not finite");
  return v;
}

ProblemFile ParseProblem(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("problem file must be a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) throw InvalidInput("missing string field 'kind'");
  if (!doc.contains("group")) throw InvalidInput("missing field 'group'");

  ProblemFile p;
  const auto kind = doc.at("kind").get<std::string>();
  std::set<std::string> allowed{"kind", "group"};
  if (kind == "channel") {
    p.kind = ProblemKind::kChannel;
    allowed.insert({"output_size", "matrix"});
  } else if (kind == "source") {
    p.kind = ProblemKind::kSource;
    allowed.insert({"source_size", "joint", "distortion", "D"});
  } else {
    throw InvalidInput("'kind' must be \"channel\" or \"source\", got \"" + kind + "\"");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw InvalidInput("unknown field '" + key + "' for kind " + kind);
  }

  p.group_orders = ParseGroupField(doc.at("group"));
  p.group = Decompose(p.group_orders).group();
  p.group->CheckEnumerable();
  const auto order = static_cast<std::size_t>(p.group->order());

  if (p.kind == ProblemKind::kChannel) {
    const auto outputs = ParseSize(doc, "output_size");
    if (!doc.contains("matrix")) throw InvalidInput("missing 'matrix'");
    p.channel.emplace(p.group, ParseMatrix(doc.at("matrix"), "matrix", order, outputs));
    return p;
  }
  const auto sources = ParseSize(doc, "source_size");
  if (!doc.contains("joint")) throw InvalidInput("missing 'joint'");
  auto joint = ParseMatrix(doc.at("joint"), "joint", sources, order);
  std::optional<Matrix> distortion;
  std::optional<double> level;
  if (doc.contains("distortion")) {
    const auto& dv = doc.at("distortion");
    if (!dv.is_array() || dv.size() != sources) throw InvalidInput("'distortion' must match the joint's shape");
    Matrix d(sources, order);
    for (std::size_t i = 0; i < sources; ++i) {
      if (!dv[i].is_array() || dv[i].size() != order) {
        throw InvalidInput("'distortion' must match the joint's shape");
      }
      for (std::size_t k = 0; k < order; ++k) d(i, k) = ParseProbability(dv[i][k]);
    }
    distortion = std::move(d);
  }
  if (doc.contains("D")) level = ParseProbability(doc.at("D"));
  p.source.emplace(p.group, std::move(joint), std::move(distortion), level);
  return p;
}

ProblemFile LoadProblem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open problem file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseProblem(buffer.str());
}

std::string SerializeProblem(const ProblemFile& problem) {
  Json doc;
  doc["kind"] = problem.kind == ProblemKind::kChannel ? "channel" : "source";
  doc["group"] = problem.group_orders;
  if (problem.kind == ProblemKind::kChannel) {
    doc["output_size"] = problem.channel->output_size();
    doc["matrix"] = MatrixJson(problem.channel->transition());
  } else {
    const auto& s = *problem.source;
    doc["source_size"] = s.source_size();
    doc["joint"] = MatrixJson(s.joint());
    if (s.distortion()) doc["distortion"] = MatrixJson(*s.distortion());
    if (s.max_distortion()) doc["D"] = *s.max_distortion();
  }
  return doc.dump(2) + "\n";
}

Json Number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const double r = std::round(value * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::abs(value) < 5e-10) value = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  return buf;
}

Json ToJson(const RateReport& report, const OutputOptions& options) {
  const auto& g = *report.group;
  const double scale = options.nats ? kLn2 : 1.0;
  auto info = [&](double v) { return Number(v * scale); };

  Json out;
  out["command"] = report.command;
  out["group"] = g.ToString();
  out["group_orders"] = report.group_orders;
  out["sense"] = report.sense == Sense::kChannel ? "channel" : "source";
  out["units"] = options.nats ? "nats" : "bits";
  out["value"] = info(report.result.value);
  out["support"] = SupportToString(g, report.result.support);
  out["optimal_w"] = WeightsJson(g, report.result.optimal_w);
  Json critical = Json::array();
  for (const auto& theta : report.result.critical_thetas) critical.push_back(ThetaJson(theta));
  out["critical_thetas"] = std::move(critical);
  Json terms = Json::array();
  for (const auto& t : report.result.terms) {
    Json row;
    row["theta"] = ThetaJson(t.theta);
    row["omega"] = Number(t.omega);
    row["info"] = info(t.info);
    row["ratio"] = info(t.ratio);
    terms.push_back(std::move(row));
  }
  out["terms"] = std::move(terms);
  out["iterations"] = report.result.iterations;
  out["diagnostic"] = report.result.diagnostic;
  if (report.closed_form) {
    Json cf;
    cf["name"] = report.closed_form->name;
    cf["value"] = info(report.closed_form->value);
    cf["gap"] = Number((report.result.value - report.closed_form->value) * scale);
    out["closed_form"] = std::move(cf);
  }
  if (report.grid) {
    Json grid;
    grid["steps"] = report.grid_steps;
    grid["points"] = report.grid->points;
    grid["value"] = info(report.grid->value);
    grid["w"] = WeightsJson(g, report.grid->w);
    // Positive gap: the solver beats the grid in the optimization direction.
    const double gap = report.sense == Sense::kChannel ? report.result.value - report.grid->value
                                                       : report.grid->value - report.result.value;
    grid["gap"] = Number(gap * scale);
    out["grid_check"] = std::move(grid);
  }
  if (report.search) {
    Json s;
    s["certified"] = false;
    s["value"] = info(report.search->value);
    s["expected_distortion"] = Number(report.search->expected_distortion);
    s["evaluations"] = report.search->evaluations;
    s["accepted"] = report.search->accepted;
    s["joint"] = RoundedMatrixJson(report.search->joint);
    out["search"] = std::move(s);
  }
  if (report.elapsed_ms) out["timing_ms"] = std::round(*report.elapsed_ms * 1000.0) / 1000.0;
  return out;
}

std::string TermsCsv(const RateReport& report) {
  const auto& g = *report.group;
  std::ostringstream os;
  for (const auto& pr : g.q_index()) os << "theta_" << pr.p << '_' << pr.e << ',';
  os << "omega,info_bits,ratio_bits\n";
  for (const auto& t : report.result.terms) {
    for (auto v : t.theta) os << v << ',';
    os << FormatNumber(t.omega) << ',' << FormatNumber(t.info) << ',' << FormatNumber(t.ratio) << '\n';
  }
  return os.str();
}

Json GroupInfoJson(const Decomposition& d) {
  const auto& g = *d.group();
  Json out;
  out["input"] = d.cyclic_orders();
  out["canonical"] = g.ToString();
  out["order"] = g.order();
  Json rings = Json::array();
  for (const auto& r : g.rings()) {
    Json ring;
    ring["p"] = r.p;
    ring["r"] = r.r;
    ring["m"] = r.m;
    ring["modulus"] = r.modulus;
    rings.push_back(std::move(ring));
  }
  out["rings"] = std::move(rings);
  Json s = Json::array(), q = Json::array();
  for (const auto& pp : g.s_index()) s.push_back({pp.p, pp.e});
  for (const auto& pp : g.q_index()) q.push_back({pp.p, pp.e});
  out["S"] = std::move(s);
  out["Q"] = std::move(q);
  Json rq = Json::object();
  for (auto p : g.primes()) rq[std::to_string(p)] = g.max_exponent(p);
  out["r_q"] = std::move(rq);
  out["is_field"] = g.is_field();
  return out;
}

Json ThetaTableJson(const GroupSpec& g, SupportMask support, const std::optional<std::vector<double>>& w) {
  const bool single_prime = g.primes().size() == 1;
  auto linear_form = [&](const std::vector<std::uint32_t>& coef) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      if (!((support >> i) & 1U) || coef[i] == 0) continue;
      os << (first ? "" : " + ") << coef[i] << "*w[" << SlotKey(g.s_index()[i]) << "]";
      if (!single_prime) os << "*log2(" << g.s_index()[i].p << ")";
      first = false;
    }
    return first ? std::string("0") : os.str();
  };
  std::vector<std::uint32_t> s_coef;
  for (const auto& pp : g.s_index()) s_coef.push_back(pp.e);

  Json out;
  out["group"] = g.ToString();
  out["support"] = SupportToString(g, support);
  out["denominator"] = linear_form(s_coef);
  if (w) out["w"] = WeightsJson(g, *w);
  Json rows = Json::array();
  for (const auto& theta : EnumerateTheta(g, support)) {
    Json row;
    row["theta"] = ThetaJson(theta);
    const auto a = OmegaCoefficients(g, theta);
    Json coef = Json::object();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if ((support >> i) & 1U) coef[SlotKey(g.s_index()[i])] = a[i];
    }
    row["numerator_coefficients"] = std::move(coef);
    row["numerator"] = linear_form(a);
    if (w) row["omega"] = Number(Omega(g, *w, theta));
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out;
}

Json ToJson(const EnsembleReport& report) {
  Json out;
  out["config"] = report.config;
  out["n"] = report.n;
  out["passed"] = report.passed();
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json row;
    row["name"] = c.name;
    row["method"] = c.method;
    row["checked"] = c.checked;
    row["violations"] = c.violations;
    row["detail"] = c.detail;
    checks.push_back(std::move(row));
  }
  out["checks"] = std::move(checks);
  return out;
}

Json ToJson(const SimulationResult& result) {
  Json out;
  out["trials"] = result.trials;
  out["errors"] = result.errors;
  out["rate"] = Number(result.rate);
  out["std_error"] = Number(result.std_error);
  return out;
}

}  // namespace abelrate
