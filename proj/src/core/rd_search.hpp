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

// Heuristic search over test channels for the source functional. Moves keep
// both marginals of p[x][u] fixed, so the source law and the uniform U law
// are preserved; a move is kept when it respects the distortion budget and
// lowers the source functional. The result is an upper bound on the best
// joint, not a certified optimum.

#ifndef ABELRATE_CORE_RD_SEARCH_HPP_
#define ABELRATE_CORE_RD_SEARCH_HPP_

#include <cstdint>

#include "core/info.hpp"
#include "core/rates.hpp"

namespace abelrate {

struct RdSearchOptions {
  std::uint64_t seed = 0;
  unsigned restarts = 3;
  unsigned proposals = 200;  // per restart
  SolverOptions solver;
};

struct RdSearchResult {
  Matrix joint;
  double value = 0.0;
  double expected_distortion = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t accepted = 0;
};

// Needs a distortion matrix and level D on `start`.
RdSearchResult SearchTestChannel(const SourceJoint& start, const RdSearchOptions& options = {});

}  // namespace abelrate

#endif  // ABELRATE_CORE_RD_SEARCH_HPP_
