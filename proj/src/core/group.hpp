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

#ifndef ABELRATE_CORE_GROUP_HPP_
#define ABELRATE_CORE_GROUP_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abelrate {

// Raised for malformed user input (bad group orders, theta out of range, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation would enumerate more than the configured cap.
class LimitExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised when elements of different groups are combined.
class GroupMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Soft cap on element enumeration.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

bool IsPrime(std::uint64_t n);
std::uint64_t IntPow(std::uint64_t base, unsigned exp);

// One Z_{p^r} ring of the canonical decomposition, the (p,r,m)-th ring.
struct Ring {
  std::uint32_t p = 0;
  std::uint32_t r = 0;
  std::uint32_t m = 0;
  std::uint64_t modulus = 0;  // p^r

  friend bool operator==(const Ring&, const Ring&) = default;
};

// A (prime, exponent) pair; used for both the S(G) and Q(G) index sets.
struct PrimePower {
  std::uint32_t p = 0;
  std::uint32_t e = 0;

  friend auto operator<=>(const PrimePower&, const PrimePower&) = default;
};

using Residues = std::vector<std::uint64_t>;

// Canonical decomposition G = (+)_{(p,r,m)} Z_{p^r}^{(m)}, rings sorted by
// (p asc, r asc, m asc). Immutable once built.
class GroupSpec {
 public:
  // Builds from arbitrary (p, r) pairs; multiplicity indices are assigned
  // after sorting.
  static GroupSpec FromPrimePowers(std::vector<PrimePower> parts);

  const std::vector<Ring>& rings() const { return rings_; }
  std::size_t num_rings() const { return rings_.size(); }
  std::uint64_t order() const { return order_; }

  const std::vector<std::uint32_t>& primes() const { return primes_; }
  // r_q = max R_q(G).
  std::uint32_t max_exponent(std::uint32_t q) const;
  std::uint32_t multiplicity(std::uint32_t p, std::uint32_t r) const;

  // S(G) = {(q,s) : q in P(G), 1 <= s <= r_q}, sorted.
  const std::vector<PrimePower>& s_index() const { return s_index_; }
  // Q(G) = {(p,r) : r in R_p(G)}, sorted.
  const std::vector<PrimePower>& q_index() const { return q_index_; }
  // Position of ring i's (p,r) pair inside q_index().
  std::size_t q_slot_of_ring(std::size_t i) const { return ring_q_slot_[i]; }

  bool is_single_ring() const { return rings_.size() == 1; }
  bool is_field() const;

  // Elements are enumerated lexicographically in the residue vector, first
  // ring most significant.
  Residues ElementAt(std::uint64_t index) const;
  std::uint64_t IndexOf(std::span<const std::uint64_t> residues) const;
  void CheckEnumerable(std::uint64_t cap = kDefaultEnumerationCap) const;

  std::string ToString() const;  // e.g. "Z_4 + Z_3 + Z_9 + Z_9"

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.rings_ == b.rings_;
  }

 private:
  std::vector<Ring> rings_;
  std::vector<std::uint32_t> primes_;
  std::vector<PrimePower> s_index_;
  std::vector<PrimePower> q_index_;
  std::vector<std::size_t> ring_q_slot_;
  std::uint64_t order_ = 1;
};

// A residue vector bound to a group.
class GroupElement {
 public:
  GroupElement(std::shared_ptr<const GroupSpec> group, Residues residues);

  static GroupElement Zero(std::shared_ptr<const GroupSpec> group);

  const GroupSpec& group() const { return *group_; }
  const std::shared_ptr<const GroupSpec>& group_ptr() const { return group_; }
  const Residues& residues() const { return residues_; }
  std::uint64_t operator[](std::size_t i) const { return residues_[i]; }

  GroupElement operator+(const GroupElement& other) const;
  GroupElement operator-(const GroupElement& other) const;
  GroupElement operator-() const;
  bool operator==(const GroupElement& other) const;

 private:
  std::shared_ptr<const GroupSpec> group_;
  Residues residues_;
};

GroupElement ScalarMul(std::uint64_t c, const GroupElement& a);

// Raw residue arithmetic used in hot loops.
void AddInPlace(const GroupSpec& g, Residues& a, std::span<const std::uint64_t> b);
Residues Negate(const GroupSpec& g, std::span<const std::uint64_t> a);

// theta_{p,r} for every (p,r) in Q(G), in q_index() order.
using ThetaVector = std::vector<std::uint32_t>;

ThetaVector ZeroTheta(const GroupSpec& g);
ThetaVector FullTheta(const GroupSpec& g);  // theta_{p,r} = r
void ValidateTheta(const GroupSpec& g, const ThetaVector& theta);
std::string ThetaToString(const ThetaVector& theta);

// H_theta = (+) p^{theta_{p,r}} Z_{p^r}^{(m)} together with its coset map.
class Subgroup {
 public:
  Subgroup(std::shared_ptr<const GroupSpec> group, ThetaVector theta);

  const GroupSpec& group() const { return *group_; }
  const ThetaVector& theta() const { return theta_; }
  std::uint64_t order() const { return order_; }
  std::uint64_t index() const { return index_; }

  bool Contains(std::span<const std::uint64_t> residues) const;
  // Canonical coset label: residue of each component mod p^{theta_{p,r}}.
  Residues CosetLabel(std::span<const std::uint64_t> residues) const;
  // Dense id in [0, index()), mixed radix over the label.
  std::uint64_t CosetId(std::span<const std::uint64_t> residues) const;
  std::uint64_t CosetId(const GroupElement& x) const;
  Residues CosetLabel(const GroupElement& x) const;

  std::vector<Residues> Elements(std::uint64_t cap = kDefaultEnumerationCap) const;

 private:
  std::shared_ptr<const GroupSpec> group_;
  ThetaVector theta_;
  std::vector<std::uint64_t> label_mod_;  // p^{theta} per ring
  std::uint64_t order_ = 1;
  std::uint64_t index_ = 1;
};

// The canonical group of a direct sum of cyclic groups together with the
// explicit isomorphism from the user's product-of-cyclics coordinates.
class Decomposition {
 public:
  const std::vector<std::uint64_t>& cyclic_orders() const { return orders_; }
  const std::shared_ptr<const GroupSpec>& group() const { return group_; }

  Residues ToCanonical(std::span<const std::uint64_t> user) const;
  std::vector<std::uint64_t> FromCanonical(std::span<const std::uint64_t> canonical) const;

 private:
  friend Decomposition Decompose(std::span<const std::uint64_t> cyclic_orders);

  struct Slot {
    std::size_t factor;      // which user factor
    std::uint64_t modulus;   // p^r
    std::size_t ring;        // position in canonical rings
  };

  std::vector<std::uint64_t> orders_;
  std::vector<Slot> slots_;
  std::shared_ptr<const GroupSpec> group_;
};

Decomposition Decompose(std::span<const std::uint64_t> cyclic_orders);
// Parses "4,3,9,9" style specs.
std::vector<std::uint64_t> ParseCyclicOrders(std::string_view text);
Decomposition DecomposeString(std::string_view text);

}  // namespace abelrate

#endif  // ABELRATE_CORE_GROUP_HPP_
