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

// Problem files and result records.
//
// A problem file is one JSON document:
//
//   {"kind": "channel", "group": [4, 3], "output_size": 2, "matrix": [[...], ...]}
//   {"kind": "source", "group": "4", "source_size": 2, "joint": [[...], ...],
//    "distortion": [[...], ...], "D": 0.1}
//
// Rows of a channel matrix and columns of a source joint follow the canonical
// element order of G. Probabilities may be numbers, decimal strings or "a/b".

#ifndef ABELRATE_CORE_IO_HPP_
#define ABELRATE_CORE_IO_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/ensemble.hpp"
#include "core/group.hpp"
#include "core/info.hpp"
#include "core/rates.hpp"
#include "core/rd_search.hpp"
#include "json.hpp"

namespace abelrate {

using Json = nlohmann::ordered_json;

enum class ProblemKind { kChannel, kSource };

struct ProblemFile {
  ProblemKind kind = ProblemKind::kChannel;
  std::vector<std::uint64_t> group_orders;
  std::shared_ptr<const GroupSpec> group;
  std::optional<ChannelSpec> channel;
  std::optional<SourceJoint> source;
};

ProblemFile ParseProblem(const std::string& text);
ProblemFile LoadProblem(const std::string& path);
// Normalized form: numbers only, fixed key order.
std::string SerializeProblem(const ProblemFile& problem);

double ParseProbability(const Json& value);

// Rounds to 1e-9 and writes +inf as the string "inf".
Json Number(double value);

struct OutputOptions {
  bool nats = false;
};

struct RateReport {
  std::string command;  // "capacity" or "rd"
  std::vector<std::uint64_t> group_orders;
  std::shared_ptr<const GroupSpec> group;
  Sense sense = Sense::kChannel;
  RateResult result;
  std::optional<ClosedForm> closed_form;
  std::optional<GridResult> grid;
  unsigned grid_steps = 0;
  std::optional<RdSearchResult> search;
  std::optional<double> elapsed_ms;
};

Json ToJson(const RateReport& report, const OutputOptions& options = {});
// Columns: theta components..., omega, info_bits, ratio_bits.
std::string TermsCsv(const RateReport& report);

Json GroupInfoJson(const Decomposition& d);
// One row per theta in Theta(support); omega is evaluated when w is given.
Json ThetaTableJson(const GroupSpec& g, SupportMask support, const std::optional<std::vector<double>>& w);
Json ToJson(const EnsembleReport& report);
Json ToJson(const SimulationResult& result);

std::string FormatNumber(double value);  // 9 decimals, "inf" for +inf

}  // namespace abelrate

#endif  // ABELRATE_CORE_IO_HPP_
