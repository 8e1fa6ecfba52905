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

// The random homomorphism ensemble behind shifted group codes, with exact
// and sampled checks of its distributional properties.
//
// An input group J = (+)_{(q,s)} Z_{q^s}^{k_{q,s}} is mapped into G^n by a
// random homomorphism phi; a codeword is phi(a) + B for a uniform dither B.

#ifndef ABELRATE_CORE_ENSEMBLE_HPP_
#define ABELRATE_CORE_ENSEMBLE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/group.hpp"
#include "core/info.hpp"
#include "core/rates.hpp"

namespace abelrate {

// SplitMix64 in counter mode: output i is mix(seed + (i + 1) * golden).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t Next();
  // Uniform on [0, bound); bound > 0.
  std::uint64_t Below(std::uint64_t bound);
  // Uniform on [0, 1).
  double Unit();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

class JSpec {
 public:
  // `counts` is indexed like g->s_index().
  JSpec(std::shared_ptr<const GroupSpec> g, std::vector<std::uint32_t> counts);

  const GroupSpec& group() const { return *g_; }
  const std::shared_ptr<const GroupSpec>& group_ptr() const { return g_; }
  const GroupSpec& input() const { return *j_; }
  const std::vector<std::uint32_t>& counts() const { return counts_; }
  // s_index() slot of each ring of J.
  std::size_t slot_of(std::size_t j_ring) const { return slot_of_[j_ring]; }
  std::uint64_t size() const { return j_->order(); }
  std::uint32_t total_count() const;
  SupportMask support() const;
  std::vector<double> weights() const;  // k_{q,s} / k
  std::string ToString() const;  // e.g. "k=(0,1,1) J=Z_4 + Z_8"

 private:
  std::shared_ptr<const GroupSpec> g_;
  std::shared_ptr<const GroupSpec> j_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::size_t> slot_of_;
};

// Parses "0,1,1" into counts over S(G).
std::vector<std::uint32_t> ParseCounts(const GroupSpec& g, const std::string& text);

// Elements of G^n are stored as n concatenated residue vectors of G.
std::uint64_t PowerOrder(const GroupSpec& g, std::size_t n);
std::uint64_t PowerIndex(const GroupSpec& g, std::span<const std::uint64_t> x);
Residues PowerElementAt(const GroupSpec& g, std::size_t n, std::uint64_t index);

// Allowed generator images for J ring (q,s) into G ring (p,r): the multiples
// of `step` in Z_{p^r}, `count` of them.
struct ImageSet {
  std::uint64_t step = 0;
  std::uint64_t count = 0;
};
ImageSet AllowedImages(const Ring& j_ring, const Ring& g_ring);

struct HomomorphismTable {
  std::size_t n = 0;
  // images[j_ring][t * R + i]: image of the j_ring-th generator of J in ring
  // i of the t-th copy of G.
  std::vector<std::vector<std::uint64_t>> images;
  Residues dither;
};

HomomorphismTable SampleHom(const JSpec& j, std::size_t n, CounterRng& rng);
// True when every image lies in its allowed set and the dither is in range.
bool SatisfiesImageConstraints(const JSpec& j, const HomomorphismTable& h);
Residues ApplyHom(const JSpec& j, const HomomorphismTable& h, std::span<const std::uint64_t> a);
Residues Encode(const JSpec& j, const HomomorphismTable& h, std::span<const std::uint64_t> a);

// p-adic depth of x in Z_{p^e}; e when x = 0.
std::uint32_t Depth(std::uint64_t x, std::uint32_t p, std::uint32_t e);

// theta of the pair (a, b): thetahat is the depth of b - a per ring of J, and
// theta_{p,r} = min over J rings with q = p of (r - s)^+ + thetahat, clamped
// to r. A prime of G that J does not reach gets theta_{p,r} = r.
ThetaVector ThetaOfPair(const JSpec& j, std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b);

// |T_theta(a)| for every theta that occurs.
std::map<ThetaVector, std::uint64_t> CountTTheta(const JSpec& j, std::span<const std::uint64_t> a);
// prod over rings (q,s,l) of J of q^(s - a_theta(q,s)).
std::uint64_t TBound(const JSpec& j, const ThetaVector& theta);
// {theta : T_theta(0) nonempty}.
std::vector<ThetaVector> BruteTheta(const JSpec& j);

// Solutions of a x = b (mod p^r) with explicit representatives a = p^da alpha,
// b = p^db beta. Empty when db < da.
std::vector<std::uint64_t> CongruenceSolutions(std::uint32_t p, std::uint32_t r, std::uint64_t a,
                                               std::uint64_t b, std::uint64_t alpha, std::uint64_t beta);
// Same with canonical representatives; a in Z_{p^s}, a != 0, s <= r.
std::vector<std::uint64_t> SolveCongruence(std::uint32_t p, std::uint32_t r, std::uint32_t s,
                                           std::uint64_t a, std::uint64_t b);
std::vector<std::uint64_t> SolveCongruenceBrute(std::uint32_t p, std::uint32_t r, std::uint64_t a,
                                                std::uint64_t b);

struct PairwiseOptions {
  std::uint64_t samples = 0;  // 0: exact only
  std::uint64_t seed = 0;
  std::uint64_t literal_cap = std::uint64_t{1} << 16;
};

struct PairwiseReport {
  ThetaVector theta;
  std::string method;  // "literal", "factorized" or "sampled"
  std::uint64_t support_cells = 0;
  std::uint64_t violations = 0;
  double tv = 0.0;        // sampled only
  double tv_bound = 0.0;  // sampled only
  bool passed = true;
};

// Checks P(phi(a)+B = u, phi(b)+B = v) = 1/(|G|^n |H_theta|^n) on
// {v - u in H_theta^n} and 0 elsewhere. Exact unless options.samples > 0.
PairwiseReport VerifyPairwiseLaw(const JSpec& j, std::size_t n, std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b, const PairwiseOptions& options = {});

struct LemmaCheck {
  std::string name;
  std::string method;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string detail;  // first violation, if any
};

struct EnsembleReport {
  std::string config;
  std::size_t n = 0;
  std::vector<LemmaCheck> checks;
  bool passed() const;
};

struct EnsembleOptions {
  std::uint64_t tables = 100;   // sampled tables for the image and homomorphism checks
  std::uint64_t samples = 0;    // extra sampled pairwise-law checks
  std::uint64_t seed = 0;
  std::uint64_t pair_cap = std::uint64_t{1} << 16;  // max (a, b) pairs checked exactly
  // Literal (g, B) enumeration budget shared by all pairs; pairs over budget
  // use the factorized count.
  std::uint64_t literal_budget = std::uint64_t{1} << 22;
  bool congruences = true;  // include the congruence solver check for the primes of G
};

EnsembleReport VerifyEnsemble(const JSpec& j, std::size_t n, const EnsembleOptions& options = {});

// Congruence solver against brute force for every a, b in Z_{p^r}, every
// admissible pair of representatives.
LemmaCheck VerifyCongruences(std::uint32_t p, std::uint32_t r);

struct SimulationResult {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double rate = 0.0;
  double std_error = 0.0;
};

// Block-error rate of maximum-likelihood decoding of phi(J) + B over a
// memoryless use of `channel`, averaged over sampled codes and messages.
// Ties are broken uniformly at random.
SimulationResult McChannelError(const JSpec& j, std::size_t n, const ChannelSpec& channel,
                                std::uint64_t trials, std::uint64_t seed);

}  // namespace abelrate

#endif  // ABELRATE_CORE_ENSEMBLE_HPP_
