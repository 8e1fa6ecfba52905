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

#include <random>
#include <set>

#include "core/group.hpp"
#include "doctest.h"
#include "support/instances.hpp"

namespace abelrate {
namespace {

using testing::Group;

TEST_CASE("canonical decomposition sorts prime powers") {
  auto g = Group("4,3,9,9");
  REQUIRE(g->num_rings() == 4);
  CHECK(g->rings()[0].p == 2);
  CHECK(g->rings()[0].r == 2);
  CHECK(g->rings()[1].p == 3);
  CHECK(g->rings()[1].r == 1);
  CHECK(g->rings()[2].r == 2);
  CHECK(g->rings()[2].m == 1);
  CHECK(g->rings()[3].m == 2);
  CHECK(g->order() == 972);
  CHECK(g->ToString() == "Z_4 + Z_3 + Z_9 + Z_9");
}

TEST_CASE("composite cyclic orders split by CRT") {
  const auto d = DecomposeString("12");
  const auto& g = *d.group();
  REQUIRE(g.num_rings() == 2);
  CHECK(g.rings()[0].modulus == 4);
  CHECK(g.rings()[1].modulus == 3);
  std::set<Residues> seen;
  for (std::uint64_t x = 0; x < 12; ++x) {
    const std::vector<std::uint64_t> user{x};
    const auto canon = d.ToCanonical(user);
    CHECK(canon[0] == x % 4);
    CHECK(canon[1] == x % 3);
    CHECK(d.FromCanonical(canon) == user);
    seen.insert(canon);
  }
  CHECK(seen.size() == 12);
}

TEST_CASE("S and Q index sets") {
  auto g = Group("2,8,3");
  CHECK(g->s_index() == std::vector<PrimePower>{{2, 1}, {2, 2}, {2, 3}, {3, 1}});
  CHECK(g->q_index() == std::vector<PrimePower>{{2, 1}, {2, 3}, {3, 1}});
  CHECK(g->max_exponent(2) == 3);
  CHECK_FALSE(g->is_field());
  CHECK(Group("5")->is_field());
  CHECK(Group("2,2")->is_field());
}

TEST_CASE("invalid group specs are rejected") {
  CHECK_THROWS_AS(DecomposeString(""), InvalidInput);
  CHECK_THROWS_AS(DecomposeString("0"), InvalidInput);
  CHECK_THROWS_AS(DecomposeString("1"), InvalidInput);
  CHECK_THROWS_AS(DecomposeString("4,x"), InvalidInput);
  CHECK_THROWS_AS(Group("1024,1024,1024")->CheckEnumerable(), LimitExceeded);
}

TEST_CASE("element enumeration is lexicographic with the first ring most significant") {
  auto g = Group("2,3");
  CHECK(g->ElementAt(0) == Residues{0, 0});
  CHECK(g->ElementAt(1) == Residues{0, 1});
  CHECK(g->ElementAt(3) == Residues{1, 0});
  for (std::uint64_t i = 0; i < g->order(); ++i) CHECK(g->IndexOf(g->ElementAt(i)) == i);
}

TEST_CASE("group laws hold exhaustively on small groups") {
  for (const char* spec : {"4", "2,4", "4,3", "9"}) {
    auto g = Group(spec);
    const auto zero = GroupElement::Zero(g);
    for (std::uint64_t i = 0; i < g->order(); ++i) {
      const GroupElement a(g, g->ElementAt(i));
      CHECK(a + zero == a);
      CHECK(a + (-a) == zero);
      for (std::uint64_t j = 0; j < g->order(); ++j) {
        const GroupElement b(g, g->ElementAt(j));
        CHECK(a + b == b + a);
        CHECK((a - b) + b == a);
      }
    }
  }
}

TEST_CASE("mixing elements of different groups is an error") {
  auto g = Group("4");
  auto h = Group("2,2");
  CHECK_THROWS_AS(GroupElement(g, g->ElementAt(1)) + GroupElement(h, h->ElementAt(1)), GroupMismatch);
}

TEST_CASE("subgroup H_theta") {
  auto g = Group("2,4");
  const Subgroup h(g, {1, 1});
  CHECK(h.order() == 2);
  CHECK(h.index() == 4);
  CHECK(h.CosetLabel(Residues{1, 3}) == Residues{1, 1});
  CHECK(h.Contains(Residues{0, 2}));
  CHECK_FALSE(h.Contains(Residues{1, 0}));
  const auto elements = h.Elements();
  CHECK(elements == std::vector<Residues>{{0, 0}, {0, 2}});

  const Subgroup whole(g, ZeroTheta(*g));
  CHECK(whole.order() == g->order());
  const Subgroup trivial(g, FullTheta(*g));
  CHECK(trivial.order() == 1);
  CHECK_THROWS_AS(Subgroup(g, {2, 0}), InvalidInput);
}

TEST_CASE("cosets of H_theta partition G") {
  auto g = Group("8,3");
  for (const ThetaVector theta : {ThetaVector{1, 0}, ThetaVector{2, 1}, ThetaVector{0, 1}}) {
    const Subgroup h(g, theta);
    std::vector<std::uint64_t> sizes(h.index(), 0);
    for (std::uint64_t x = 0; x < g->order(); ++x) ++sizes[h.CosetId(g->ElementAt(x))];
    for (auto s : sizes) CHECK(s == h.order());
  }
}

TEST_CASE("scalar multiplication") {
  auto g = Group("8");
  const GroupElement a(g, {3});
  CHECK(ScalarMul(4, a)[0] == 4);
  CHECK(ScalarMul(0, a) == GroupElement::Zero(g));
}

}  // namespace
}  // namespace abelrate
