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

// Seeded random channels and sources shared by the test binaries.

#ifndef ABELRATE_TESTS_SUPPORT_INSTANCES_HPP_
#define ABELRATE_TESTS_SUPPORT_INSTANCES_HPP_

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "core/group.hpp"
#include "core/info.hpp"

namespace abelrate::testing {

inline std::shared_ptr<const GroupSpec> Group(const std::string& orders) {
  return DecomposeString(orders).group();
}

// Random point of the probability simplex (flat Dirichlet).
inline std::vector<double> RandomDistribution(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) total += (v = e(rng));
  for (auto& v : p) v /= total;
  return p;
}

inline ChannelSpec RandomChannel(std::shared_ptr<const GroupSpec> g, std::size_t outputs,
                                 std::mt19937_64& rng) {
  Matrix w(g->order(), outputs);
  for (std::size_t x = 0; x < w.rows(); ++x) {
    const auto row = RandomDistribution(outputs, rng);
    for (std::size_t y = 0; y < outputs; ++y) w(x, y) = row[y];
  }
  return ChannelSpec(std::move(g), std::move(w));
}

// Y = X + Z over G with Z drawn from a random law.
inline ChannelSpec RandomAdditiveChannel(std::shared_ptr<const GroupSpec> g, std::mt19937_64& rng) {
  const auto noise = RandomDistribution(g->order(), rng);
  Matrix w(g->order(), g->order());
  for (std::uint64_t x = 0; x < g->order(); ++x) {
    for (std::uint64_t z = 0; z < g->order(); ++z) {
      auto y = g->ElementAt(x);
      AddInPlace(*g, y, g->ElementAt(z));
      w(x, g->IndexOf(y)) += noise[z];
    }
  }
  return ChannelSpec(std::move(g), std::move(w));
}

// Joint p[x][u] with uniform U: each column is a random conditional law of X.
inline SourceJoint RandomSource(std::shared_ptr<const GroupSpec> g, std::size_t source_size,
                                std::mt19937_64& rng) {
  Matrix p(source_size, g->order());
  const double pu = 1.0 / static_cast<double>(g->order());
  for (std::uint64_t u = 0; u < g->order(); ++u) {
    const auto col = RandomDistribution(source_size, rng);
    for (std::size_t x = 0; x < source_size; ++x) p(x, u) = pu * col[x];
  }
  return SourceJoint(std::move(g), std::move(p));
}

}  // namespace abelrate::testing

#endif  // ABELRATE_TESTS_SUPPORT_INSTANCES_HPP_
