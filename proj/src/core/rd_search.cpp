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

#include "core/rd_search.hpp"

#include <algorithm>

#include "core/ensemble.hpp"

namespace abelrate {

namespace {

struct Move {
  std::size_t x1, x2, u1, u2;
  double delta;
};

// The largest step keeping every touched entry nonnegative, times a fraction.
std::optional<Move> Propose(const Matrix& p, CounterRng& rng) {
  if (p.rows() < 2 || p.cols() < 2) return std::nullopt;
  Move m{};
  m.x1 = rng.Below(p.rows());
  m.x2 = (m.x1 + 1 + rng.Below(p.rows() - 1)) % p.rows();
  m.u1 = rng.Below(p.cols());
  m.u2 = (m.u1 + 1 + rng.Below(p.cols() - 1)) % p.cols();
  const double room = std::min(p(m.x1, m.u2), p(m.x2, m.u1));
  if (room <= 0.0) return std::nullopt;
  m.delta = room / static_cast<double>(1U << rng.Below(6));
  return m;
}

Matrix Apply(const Matrix& p, const Move& m) {
  Matrix q = p;
  q(m.x1, m.u1) += m.delta;
  q(m.x2, m.u2) += m.delta;
  q(m.x1, m.u2) = std::max(0.0, q(m.x1, m.u2) - m.delta);
  q(m.x2, m.u1) = std::max(0.0, q(m.x2, m.u1) - m.delta);
  return q;
}

double Distortion(const Matrix& p, const Matrix& d) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.data().size(); ++i) e += p.data()[i] * d.data()[i];
  return e;
}

}  // namespace

RdSearchResult SearchTestChannel(const SourceJoint& start, const RdSearchOptions& options) {
  if (!start.distortion() || !start.max_distortion()) {
    throw InvalidInput("test-channel search needs a distortion matrix and a level D");
  }
  const auto& d = *start.distortion();
  const double budget = *start.max_distortion() + kProbabilityTolerance;
  CounterRng rng(options.seed);
  RdSearchResult best;
  auto evaluate = [&](const Matrix& p) {
    ++best.evaluations;
    return Isc(SourceJoint(start.group_ptr(), p), options.solver).value;
  };
  best.joint = start.joint();
  best.value = evaluate(best.joint);

  for (unsigned restart = 0; restart < std::max(1U, options.restarts); ++restart) {
    Matrix current = start.joint();
    if (restart > 0) {
      // Random feasible walk away from the starting joint.
      for (unsigned k = 0; k < 4 * current.data().size(); ++k) {
        if (auto m = Propose(current, rng)) {
          auto next = Apply(current, *m);
          if (Distortion(next, d) <= budget) current = std::move(next);
        }
      }
    }
    double value = evaluate(current);
    for (unsigned k = 0; k < options.proposals; ++k) {
      const auto m = Propose(current, rng);
      if (!m) continue;
      auto next = Apply(current, *m);
      if (Distortion(next, d) > budget) continue;
      const double v = evaluate(next);
      if (v < value) {
        value = v;
        current = std::move(next);
        ++best.accepted;
      }
    }
    if (value < best.value) {
      best.value = value;
      best.joint = current;
    }
  }
  best.expected_distortion = Distortion(best.joint, d);
  return best;
}

}  // namespace abelrate
