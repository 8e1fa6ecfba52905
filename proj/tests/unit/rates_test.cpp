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
#include <random>
#include <set>

#include "core/rates.hpp"
#include "doctest.h"
#include "support/instances.hpp"

namespace abelrate {
namespace {

using testing::Group;

SupportMask Mask(const GroupSpec& g, const std::string& text) { return ParseSupport(g, text); }

TEST_CASE("theta of thetahat on Z_8 with two supported weights") {
  auto g = Group("8");
  const auto mask = Mask(*g, "2:2,2:3");
  for (std::uint32_t h2 = 0; h2 <= 2; ++h2) {
    for (std::uint32_t h3 = 0; h3 <= 3; ++h3) {
      const std::vector<std::uint32_t> hat{0, h2, h3};
      CHECK(ThetaOfThetaHat(*g, mask, hat) == ThetaVector{std::min(1 + h2, h3)});
    }
  }
  CHECK(ThetaOfThetaHat(*g, FullSupport(*g), std::vector<std::uint32_t>{0, 0, 0}) == ThetaVector{0});
}

TEST_CASE("theta of thetahat on Z_4 + Z_3 with full support") {
  auto g = Group("4,3");
  const auto full = FullSupport(*g);
  // s_index order: (2,1), (2,2), (3,1).
  for (std::uint32_t a = 0; a <= 1; ++a) {
    for (std::uint32_t b = 0; b <= 2; ++b) {
      for (std::uint32_t c = 0; c <= 1; ++c) {
        const std::vector<std::uint32_t> hat{a, b, c};
        CHECK(ThetaOfThetaHat(*g, full, hat) == ThetaVector{std::min(1 + a, b), c});
      }
    }
  }
}

TEST_CASE("theta of thetahat clamps to the ring exponent") {
  auto g = Group("2,4");
  // Only (2,2) supported: theta_{2,1} = (1-2)^+ + hat = hat, capped at 1.
  const std::vector<std::uint32_t> hat{0, 2};
  CHECK(ThetaOfThetaHat(*g, Mask(*g, "2:2"), hat) == ThetaVector{1, 2});
}

TEST_CASE("theta of thetahat rejects an uncovered prime") {
  auto g = Group("4,3");
  CHECK_THROWS_AS(ThetaOfThetaHat(*g, Mask(*g, "2:2"), std::vector<std::uint32_t>{0, 0, 0}),
                  InvalidInput);
  CHECK_THROWS_AS(EnumerateTheta(*g, Mask(*g, "2:1,2:2")), InvalidInput);
}

TEST_CASE("Theta sets for small groups") {
  auto z8 = Group("8");
  CHECK(EnumerateTheta(*z8, Mask(*z8, "2:2,2:3")) ==
        std::vector<ThetaVector>{{0}, {1}, {2}, {3}});

  auto z4z3 = Group("4,3");
  const std::set<ThetaVector> expect{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
  const auto got = EnumerateTheta(*z4z3, FullSupport(*z4z3));
  CHECK(std::set<ThetaVector>(got.begin(), got.end()) == expect);
  CHECK(got.size() == expect.size());

  auto z2z4 = Group("2,4");
  CHECK(EnumerateTheta(*z2z4, Mask(*z2z4, "2:1")) == std::vector<ThetaVector>{{0, 1}, {1, 2}});
  CHECK(EnumerateTheta(*z2z4, Mask(*z2z4, "2:2")) ==
        std::vector<ThetaVector>{{0, 0}, {1, 1}, {1, 2}});
  CHECK(EnumerateTheta(*z2z4, FullSupport(*z2z4)) ==
        std::vector<ThetaVector>{{0, 0}, {0, 1}, {1, 1}, {1, 2}});
}

TEST_CASE("full theta is always reachable and zero theta needs every top exponent") {
  for (const char* spec : {"8", "4,3", "2,4", "2,8", "4,4", "9,3", "2,2,4"}) {
    auto g = Group(spec);
    for (auto mask : AdmissibleSupports(*g)) {
      const auto thetas = EnumerateTheta(*g, mask);
      CHECK(std::find(thetas.begin(), thetas.end(), FullTheta(*g)) != thetas.end());
      bool has_top = true;
      for (auto q : g->primes()) {
        const PrimePower top{q, g->max_exponent(q)};
        const auto it = std::find(g->s_index().begin(), g->s_index().end(), top);
        has_top = has_top && ((mask >> (it - g->s_index().begin())) & 1U);
      }
      const bool has_zero = std::find(thetas.begin(), thetas.end(), ZeroTheta(*g)) != thetas.end();
      CHECK(has_zero == has_top);
    }
  }
}

TEST_CASE("omega coefficients never exceed s") {
  for (const char* spec : {"8", "4,3", "2,4"}) {
    auto g = Group(spec);
    for (const auto& theta : AllThetas(*g)) {
      const auto a = OmegaCoefficients(*g, theta);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] <= g->s_index()[i].e);
    }
    CHECK(OmegaCoefficients(*g, ZeroTheta(*g)) == std::vector<std::uint32_t>(g->s_index().size(), 0));
  }
}

TEST_CASE("omega on Z_8 matches the two-weight formulas exactly") {
  auto g = Group("8");
  const Rational w2(2, 7), w3(5, 7);
  const std::vector<Rational> w{0, w2, w3};
  CHECK(OmegaExact(*g, w, {0}) == 0);
  CHECK(OmegaExact(*g, w, {1}) == w3 / (2 * w2 + 3 * w3));
  CHECK(OmegaExact(*g, w, {2}) == (w2 + 2 * w3) / (2 * w2 + 3 * w3));
  CHECK(OmegaExact(*g, w, {3}) == 1);
}

TEST_CASE("Theta depends only on the support") {
  auto g = Group("2,4");
  const std::vector<double> a{0.25, 0.75}, b{0.6, 0.4};
  CHECK(SupportOf(*g, a) == SupportOf(*g, b));
  std::mt19937_64 rng(1);
  const auto terms = ChannelTerms(testing::RandomChannel(g, 3, rng));
  const auto ta = TermsAt(*g, terms, Sense::kChannel, a);
  const auto tb = TermsAt(*g, terms, Sense::kChannel, b);
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i].theta == tb[i].theta);
}

TEST_CASE("Z_4 merged-pair channel") {
  auto g = Group("4");
  // 0 -> y0, 1 -> y*, 2 -> y2, 3 -> y*.
  ChannelSpec c(g, Matrix::FromRows({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 0, 1}}));
  const auto result = Icc(c);
  CHECK(result.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(IccZprClosedForm(c) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isfinite(result.value));
}

TEST_CASE("Z_4 identity channel reaches two bits") {
  auto g = Group("4");
  ChannelSpec c(g, Matrix::FromRows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
  CHECK(Icc(c).value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("constant terms on a field give the constant") {
  auto g = Group("3");
  const TermTable terms{{{0}, 0.7}, {{1}, 0.7}};
  CHECK(SolveMinimax(*g, terms, Sense::kChannel).value == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(SolveMinimax(*g, terms, Sense::kSource).value == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("solver matches closed forms on random Z_p^r instances") {
  std::mt19937_64 rng(7);
  for (const char* spec : {"4", "8", "9", "27"}) {
    auto g = Group(spec);
    for (int trial = 0; trial < 5; ++trial) {
      const auto c = testing::RandomChannel(g, 4, rng);
      CHECK(Icc(c).value == doctest::Approx(IccZprClosedForm(c)).epsilon(1e-8));
      const auto j = testing::RandomSource(g, 3, rng);
      CHECK(Isc(j).value == doctest::Approx(IscZprClosedForm(j)).epsilon(1e-8));
    }
  }
}

TEST_CASE("Z_2 + Z_4 channel equalizes the two coset terms") {
  std::mt19937_64 rng(11);
  auto g = Group("2,4");
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = testing::RandomChannel(g, 3, rng);
    const auto terms = ChannelTerms(c);
    const auto result = SolveMinimax(*g, terms, Sense::kChannel);
    const double fine = terms.at({1, 1}), coarse = terms.at({0, 1});
    CHECK(result.value == doctest::Approx(std::min(fine + coarse, terms.at({0, 0}))).epsilon(1e-8));
    if (fine + coarse < terms.at({0, 0}) - 1e-6) {
      const double w2 = result.optimal_w[1] / result.optimal_w[0];
      CHECK(w2 == doctest::Approx(fine / coarse).epsilon(1e-6));
    }
  }
}

TEST_CASE("channel value never exceeds I(X;Y) and source never drops below I(U;X)") {
  std::mt19937_64 rng(5);
  for (const char* spec : {"2,4", "4,3", "8", "2,2"}) {
    auto g = Group(spec);
    for (int trial = 0; trial < 3; ++trial) {
      const auto c = testing::RandomChannel(g, 3, rng);
      CHECK(Icc(c).value <= MutualInformation(c.UniformJoint()) + 1e-9);
      const auto j = testing::RandomSource(g, 3, rng);
      CHECK(Isc(j).value >= CosetMiSource(j, FullTheta(*g)) - 1e-9);
    }
  }
}

TEST_CASE("reported value equals the objective at the witness") {
  std::mt19937_64 rng(3);
  for (const char* spec : {"2,4", "4,3", "8"}) {
    auto g = Group(spec);
    const auto c = testing::RandomChannel(g, 3, rng);
    const auto terms = ChannelTerms(c);
    const auto result = SolveMinimax(*g, terms, Sense::kChannel);
    CHECK(EvaluateObjective(*g, terms, Sense::kChannel, result.optimal_w) ==
          doctest::Approx(result.value).epsilon(1e-9));
    CHECK_FALSE(result.critical_thetas.empty());
  }
}

TEST_CASE("source term with omega zero and positive information is infinite") {
  auto g = Group("2,4");
  std::mt19937_64 rng(2);
  const auto terms = SourceTerms(testing::RandomSource(g, 3, rng));
  // Support {(2,1)}: theta (0,1) has omega 0 and positive information.
  const std::vector<double> w{1.0, 0.0};
  CHECK(std::isinf(EvaluateObjective(*g, terms, Sense::kSource, w)));
}

TEST_CASE("grid search brackets the solver") {
  std::mt19937_64 rng(9);
  auto g = Group("8");
  const auto c = testing::RandomChannel(g, 4, rng);
  const auto terms = ChannelTerms(c);
  const auto exact = SolveMinimax(*g, terms, Sense::kChannel);
  const auto grid = GridSearch(*g, terms, Sense::kChannel, 60);
  CHECK(grid.value <= exact.value + 1e-9);
  CHECK(grid.value >= exact.value - 2e-2);
}

TEST_CASE("support parsing") {
  auto g = Group("4,3");
  CHECK(SupportToString(*g, Mask(*g, "3:1,2:2")) == "2:2,3:1");
  CHECK_THROWS_AS(Mask(*g, "2:3"), InvalidInput);
  CHECK_THROWS_AS(Mask(*g, "x"), InvalidInput);
  CHECK(AdmissibleSupports(*g).size() == 3);
}

}  // namespace
}  // namespace abelrate
