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

#include <cmath>
#include <set>

#include "core/ensemble.hpp"
#include "doctest.h"
#include "support/instances.hpp"

namespace abelrate {
namespace {

using testing::Group;

TEST_CASE("counter rng is reproducible and in range") {
  CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.Next();
    CHECK(x == b.Next());
    CHECK(x != c.Next());
  }
  CounterRng d(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(d.Below(7) < 7);
    const double u = d.Unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("J construction") {
  auto g = Group("8");
  const JSpec j(g, {0, 1, 1});
  CHECK(j.size() == 32);
  CHECK(j.input().num_rings() == 2);
  CHECK(j.slot_of(0) == 1);
  CHECK(j.slot_of(1) == 2);
  CHECK(j.ToString() == "k=(0,1,1) J=Z_4 + Z_8");
  CHECK_THROWS_AS(JSpec(g, {0, 0, 0}), InvalidInput);
  CHECK_THROWS_AS(JSpec(g, {1, 1}), InvalidInput);
  CHECK(ParseCounts(*g, "0,1,1") == std::vector<std::uint32_t>{0, 1, 1});
  CHECK_THROWS_AS(ParseCounts(*g, "0,1"), InvalidInput);
}

TEST_CASE("generator images follow the allowed sets") {
  CounterRng rng(5);
  {
    const JSpec j(Group("4"), {0, 1});
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 200; ++i) seen.insert(SampleHom(j, 1, rng).images[0][0]);
    CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3});
  }
  {
    const JSpec j(Group("4"), {1, 0});
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 200; ++i) seen.insert(SampleHom(j, 1, rng).images[0][0]);
    CHECK(seen == std::set<std::uint64_t>{0, 2});
  }
  {
    // J = Z_3 inside G = Z_4 + Z_3: the image in the Z_4 ring is always 0.
    const JSpec j(Group("4,3"), {0, 0, 1});
    for (int i = 0; i < 200; ++i) {
      const auto h = SampleHom(j, 2, rng);
      CHECK(h.images[0][0] == 0);
      CHECK(h.images[0][2] == 0);
      CHECK(SatisfiesImageConstraints(j, h));
    }
  }
  const JSpec j(Group("4"), {1, 0});
  auto h = SampleHom(j, 1, rng);
  h.images[0][0] = 1;
  CHECK_FALSE(SatisfiesImageConstraints(j, h));
}

TEST_CASE("applying a homomorphism") {
  const JSpec j(Group("4"), {1, 0});
  HomomorphismTable h{1, {{2}}, {3}};
  CHECK(ApplyHom(j, h, Residues{1}) == Residues{2});
  CHECK(ApplyHom(j, h, Residues{0}) == Residues{0});
  CHECK(Encode(j, h, Residues{1}) == Residues{1});
}

TEST_CASE("theta of a pair") {
  const JSpec z8(Group("8"), {0, 0, 1});
  CHECK(ThetaOfPair(z8, Residues{3}, Residues{3}) == ThetaVector{3});
  CHECK(ThetaOfPair(z8, Residues{1}, Residues{5}) == ThetaVector{2});
  const JSpec mixed(Group("8"), {1, 0, 1});
  CHECK(ThetaOfPair(mixed, Residues{0, 0}, Residues{1, 2}) == ThetaVector{1});
  CHECK(Depth(0, 2, 3) == 3);
  CHECK(Depth(12, 2, 4) == 2);
}

TEST_CASE("T_theta census on Z_8") {
  const JSpec j(Group("8"), {0, 0, 1});
  const auto counts = CountTTheta(j, Residues{0});
  CHECK(counts.at({3}) == 1);
  CHECK(counts.at({2}) == 1);
  CHECK(counts.at({1}) == 2);
  CHECK(counts.at({0}) == 4);
  for (const auto& [theta, count] : counts) CHECK(count <= TBound(j, theta));
}

TEST_CASE("brute-force Theta sets") {
  CHECK(BruteTheta(JSpec(Group("8"), {0, 1, 1})) == std::vector<ThetaVector>{{0}, {1}, {2}, {3}});
  auto g = Group("4,3");
  const JSpec j(g, {1, 1, 1});
  CHECK(BruteTheta(j) == EnumerateTheta(*g, j.support()));
  CHECK(BruteTheta(j).size() == 6);
}

TEST_CASE("congruence examples") {
  CHECK(SolveCongruence(2, 3, 2, 2, 4) == std::vector<std::uint64_t>{2, 6});
  CHECK(SolveCongruence(2, 3, 2, 2, 1).empty());
  for (std::uint64_t b = 0; b < 9; ++b) CHECK(SolveCongruence(3, 2, 1, 1, b) == std::vector<std::uint64_t>{b});
  CHECK_THROWS_AS(SolveCongruence(2, 3, 2, 0, 1), InvalidInput);
  CHECK_THROWS_AS(SolveCongruence(2, 3, 1, 2, 1), InvalidInput);
  CHECK(CongruenceSolutions(2, 3, 2, 4, 5, 3) == std::vector<std::uint64_t>{2, 6});
}

TEST_CASE("congruence solver matches brute force exhaustively") {
  for (std::uint32_t p : {2u, 3u}) {
    for (std::uint32_t r = 1; r <= 3; ++r) {
      const auto c = VerifyCongruences(p, r);
      CHECK(c.violations == 0);
      CHECK(c.checked > 0);
    }
  }
}

TEST_CASE("pairwise law on Z_4") {
  const JSpec j(Group("4"), {0, 1});
  const auto r = VerifyPairwiseLaw(j, 1, Residues{0}, Residues{2});
  CHECK(r.theta == ThetaVector{1});
  CHECK(r.method == "literal");
  CHECK(r.support_cells == 8);
  CHECK(r.passed);
  const auto same = VerifyPairwiseLaw(j, 1, Residues{1}, Residues{1});
  CHECK(same.support_cells == 4);
  CHECK(same.passed);
  const JSpec half(Group("4"), {1, 0});
  const auto h = VerifyPairwiseLaw(half, 1, Residues{0}, Residues{1});
  CHECK(h.theta == ThetaVector{1});
  CHECK(h.passed);
}

TEST_CASE("literal and factorized routes agree") {
  for (const char* spec : {"4", "2,4", "6"}) {
    auto g = Group(spec);
    const JSpec j(g, std::vector<std::uint32_t>(g->s_index().size(), 1));
    PairwiseOptions literal, factorized;
    factorized.literal_cap = 0;
    for (std::uint64_t x = 0; x < j.size(); ++x) {
      const auto a = j.input().ElementAt(0), b = j.input().ElementAt(x);
      const auto l = VerifyPairwiseLaw(j, 1, a, b, literal);
      const auto f = VerifyPairwiseLaw(j, 1, a, b, factorized);
      CHECK(l.method == "literal");
      CHECK(f.method == "factorized");
      CHECK(l.passed);
      CHECK(f.passed);
      CHECK(l.support_cells == f.support_cells);
    }
  }
}

TEST_CASE("sampled pairwise law stays within its bound") {
  const JSpec j(Group("2,4"), {1, 1});
  PairwiseOptions po;
  po.samples = 20000;
  po.seed = 9;
  const auto r = VerifyPairwiseLaw(j, 1, Residues{0, 0}, Residues{1, 1}, po);
  CHECK(r.method == "sampled");
  CHECK(r.violations == 0);
  CHECK(r.tv <= r.tv_bound);
}

TEST_CASE("ensemble verification passes on small configurations") {
  for (const auto& [spec, counts, n] :
       std::vector<std::tuple<const char*, std::vector<std::uint32_t>, std::size_t>>{
           {"4", {0, 1}, 1}, {"4", {1, 1}, 2}, {"8", {0, 1, 1}, 1}, {"4,3", {1, 1, 1}, 1}, {"2,4", {1, 1}, 1},
           {"3", {2}, 2}, {"6", {1, 0}, 1}}) {
    const JSpec j(Group(spec), counts);
    EnsembleOptions options;
    options.tables = 20;
    options.samples = 2000;
    const auto report = VerifyEnsemble(j, n, options);
    for (const auto& c : report.checks) {
      INFO(report.config << " " << c.name << " " << c.detail);
      CHECK(c.violations == 0);
    }
    CHECK(report.passed());
  }
}

TEST_CASE("noiseless and useless channels") {
  auto g = Group("4");
  const JSpec j(g, {0, 1});
  Matrix identity(4, 4);
  for (int i = 0; i < 4; ++i) identity(i, i) = 1.0;
  const auto clean = McChannelError(j, 2, ChannelSpec(g, identity), 400, 1);
  // Only non-injective codes can err; phi(1) = 0 happens with probability 1/16.
  CHECK(clean.rate < 0.15);

  const auto blind = McChannelError(j, 2, ChannelSpec(g, Matrix(4, 3, 1.0 / 3)), 4000, 2);
  CHECK(std::abs(blind.rate - 0.75) <= 3 * std::sqrt(0.75 * 0.25 / 4000));
}

TEST_CASE("error rate drops as the code shrinks") {
  auto g = Group("4");
  Matrix w(4, 4);
  const double noise[4] = {0.9, 0.05, 0.0, 0.05};
  for (int x = 0; x < 4; ++x) {
    for (int z = 0; z < 4; ++z) w(x, (x + z) % 4) = noise[z];
  }
  const ChannelSpec c(g, w);
  double previous = 1.0;
  for (std::uint32_t k : {3u, 2u, 1u}) {
    const auto r = McChannelError(JSpec(g, {0, k}), 4, c, 3000, 7);
    CHECK(r.rate <= previous + 3 * r.std_error);
    previous = r.rate;
  }
}

TEST_CASE("simulation is deterministic") {
  auto g = Group("2,4");
  std::mt19937_64 rng(3);
  const auto c = testing::RandomChannel(g, 4, rng);
  const JSpec j(g, {1, 1});
  const auto a = McChannelError(j, 2, c, 200, 11);
  const auto b = McChannelError(j, 2, c, 200, 11);
  CHECK(a.errors == b.errors);
}

}  // namespace
}  // namespace abelrate
