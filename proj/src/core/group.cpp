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

#include "core/group.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace abelrate {

bool IsPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t IntPow(std::uint64_t base, unsigned exp) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      throw LimitExceeded("integer power overflows 64 bits");
    }
    out *= base;
  }
  return out;
}

namespace {

std::vector<PrimePower> Factorize(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    PrimePower pp{static_cast<std::uint32_t>(d), 0};
    while (n % d == 0) {
      n /= d;
      ++pp.e;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({static_cast<std::uint32_t>(n), 1});
  return out;
}

// Inverse of a mod m for gcd(a, m) = 1.
std::uint64_t ModInverse(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    std::tie(t, new_t) = std::make_tuple(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_tuple(new_r, r - q * new_r);
  }
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

}  // namespace

GroupSpec GroupSpec::FromPrimePowers(std::vector<PrimePower> parts) {
  if (parts.empty()) throw InvalidInput("group must have at least one ring");
  for (const auto& pp : parts) {
    if (!IsPrime(pp.p)) throw InvalidInput("ring prime " + std::to_string(pp.p) + " is not prime");
    if (pp.e < 1) throw InvalidInput("ring exponent must be >= 1");
  }
  std::sort(parts.begin(), parts.end());

  GroupSpec g;
  std::map<PrimePower, std::uint32_t> count;
  for (const auto& pp : parts) {
    const std::uint32_t m = ++count[pp];
    const std::uint64_t modulus = IntPow(pp.p, pp.e);
    g.rings_.push_back({pp.p, pp.e, m, modulus});
    if (g.order_ > std::numeric_limits<std::uint64_t>::max() / modulus) {
      throw LimitExceeded("group order overflows 64 bits");
    }
    g.order_ *= modulus;
    if (g.primes_.empty() || g.primes_.back() != pp.p) g.primes_.push_back(pp.p);
  }
  for (const auto& [pp, _] : count) g.q_index_.push_back(pp);
  for (auto q : g.primes_) {
    for (std::uint32_t s = 1; s <= g.max_exponent(q); ++s) g.s_index_.push_back({q, s});
  }
  for (const auto& ring : g.rings_) {
    auto it = std::lower_bound(g.q_index_.begin(), g.q_index_.end(), PrimePower{ring.p, ring.r});
    g.ring_q_slot_.push_back(static_cast<std::size_t>(it - g.q_index_.begin()));
  }
  return g;
}

std::uint32_t GroupSpec::max_exponent(std::uint32_t q) const {
  std::uint32_t best = 0;
  for (const auto& ring : rings_) {
    if (ring.p == q) best = std::max(best, ring.r);
  }
  return best;
}

std::uint32_t GroupSpec::multiplicity(std::uint32_t p, std::uint32_t r) const {
  std::uint32_t n = 0;
  for (const auto& ring : rings_) n += (ring.p == p && ring.r == r) ? 1 : 0;
  return n;
}

bool GroupSpec::is_field() const {
  return primes_.size() == 1 && q_index_.size() == 1 && q_index_[0].e == 1;
}

Residues GroupSpec::ElementAt(std::uint64_t index) const {
  if (index >= order_) throw InvalidInput("element index out of range");
  Residues out(rings_.size());
  for (std::size_t i = rings_.size(); i-- > 0;) {
    out[i] = index % rings_[i].modulus;
    index /= rings_[i].modulus;
  }
  return out;
}

std::uint64_t GroupSpec::IndexOf(std::span<const std::uint64_t> residues) const {
  if (residues.size() != rings_.size()) throw GroupMismatch("residue vector length mismatch");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < rings_.size(); ++i) {
    if (residues[i] >= rings_[i].modulus) throw InvalidInput("residue out of range");
    index = index * rings_[i].modulus + residues[i];
  }
  return index;
}

void GroupSpec::CheckEnumerable(std::uint64_t cap) const {
  if (order_ > cap) {
    throw LimitExceeded("group order " + std::to_string(order_) + " exceeds enumeration cap " +
                        std::to_string(cap));
  }
}

std::string GroupSpec::ToString() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rings_.size(); ++i) {
    if (i) os << " + ";
    os << "Z_" << rings_[i].modulus;
  }
  return os.str();
}

GroupElement::GroupElement(std::shared_ptr<const GroupSpec> group, Residues residues)
    : group_(std::move(group)), residues_(std::move(residues)) {
  if (residues_.size() != group_->num_rings()) throw GroupMismatch("residue vector length mismatch");
  for (std::size_t i = 0; i < residues_.size(); ++i) {
    if (residues_[i] >= group_->rings()[i].modulus) throw InvalidInput("residue out of range");
  }
}

GroupElement GroupElement::Zero(std::shared_ptr<const GroupSpec> group) {
  Residues zeros(group->num_rings(), 0);
  return GroupElement(std::move(group), std::move(zeros));
}

namespace {

void RequireSameGroup(const GroupElement& a, const GroupElement& b) {
  if (a.group_ptr() != b.group_ptr() && !(a.group() == b.group())) {
    throw GroupMismatch("elements belong to different groups");
  }
}

}  // namespace

GroupElement GroupElement::operator+(const GroupElement& other) const {
  RequireSameGroup(*this, other);
  Residues out = residues_;
  AddInPlace(*group_, out, other.residues_);
  return GroupElement(group_, std::move(out));
}

GroupElement GroupElement::operator-() const { return GroupElement(group_, Negate(*group_, residues_)); }

GroupElement GroupElement::operator-(const GroupElement& other) const { return *this + (-other); }

bool GroupElement::operator==(const GroupElement& other) const {
  RequireSameGroup(*this, other);
  return residues_ == other.residues_;
}

GroupElement ScalarMul(std::uint64_t c, const GroupElement& a) {
  Residues out(a.residues().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto mod = a.group().rings()[i].modulus;
    out[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(c % mod) * a[i]) % mod);
  }
  return GroupElement(a.group_ptr(), std::move(out));
}

void AddInPlace(const GroupSpec& g, Residues& a, std::span<const std::uint64_t> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto mod = g.rings()[i].modulus;
    a[i] += b[i];
    if (a[i] >= mod) a[i] -= mod;
  }
}

Residues Negate(const GroupSpec& g, std::span<const std::uint64_t> a) {
  Residues out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] == 0 ? 0 : g.rings()[i].modulus - a[i];
  }
  return out;
}

ThetaVector ZeroTheta(const GroupSpec& g) { return ThetaVector(g.q_index().size(), 0); }

ThetaVector FullTheta(const GroupSpec& g) {
  ThetaVector out;
  for (const auto& pr : g.q_index()) out.push_back(pr.e);
  return out;
}

void ValidateTheta(const GroupSpec& g, const ThetaVector& theta) {
  if (theta.size() != g.q_index().size()) {
    throw InvalidInput("theta has " + std::to_string(theta.size()) + " components, expected " +
                       std::to_string(g.q_index().size()));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta[i] > g.q_index()[i].e) {
      throw InvalidInput("theta component " + std::to_string(theta[i]) + " exceeds r = " +
                         std::to_string(g.q_index()[i].e));
    }
  }
}

std::string ThetaToString(const ThetaVector& theta) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < theta.size(); ++i) os << (i ? "," : "") << theta[i];
  os << ')';
  return os.str();
}

Subgroup::Subgroup(std::shared_ptr<const GroupSpec> group, ThetaVector theta)
    : group_(std::move(group)), theta_(std::move(theta)) {
  ValidateTheta(*group_, theta_);
  for (std::size_t i = 0; i < group_->num_rings(); ++i) {
    const auto& ring = group_->rings()[i];
    const auto t = theta_[group_->q_slot_of_ring(i)];
    const auto mod = IntPow(ring.p, t);
    label_mod_.push_back(mod);
    index_ *= mod;
    order_ *= IntPow(ring.p, ring.r - t);
  }
}

bool Subgroup::Contains(std::span<const std::uint64_t> residues) const {
  for (std::size_t i = 0; i < label_mod_.size(); ++i) {
    if (residues[i] % label_mod_[i] != 0) return false;
  }
  return true;
}

Residues Subgroup::CosetLabel(std::span<const std::uint64_t> residues) const {
  if (residues.size() != label_mod_.size()) throw GroupMismatch("residue vector length mismatch");
  Residues out(residues.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = residues[i] % label_mod_[i];
  return out;
}

std::uint64_t Subgroup::CosetId(std::span<const std::uint64_t> residues) const {
  std::uint64_t id = 0;
  for (std::size_t i = 0; i < label_mod_.size(); ++i) {
    id = id * label_mod_[i] + residues[i] % label_mod_[i];
  }
  return id;
}

std::uint64_t Subgroup::CosetId(const GroupElement& x) const {
  if (!(x.group() == *group_)) throw GroupMismatch("element not in subgroup's group");
  return CosetId(x.residues());
}

Residues Subgroup::CosetLabel(const GroupElement& x) const {
  if (!(x.group() == *group_)) throw GroupMismatch("element not in subgroup's group");
  return CosetLabel(x.residues());
}

std::vector<Residues> Subgroup::Elements(std::uint64_t cap) const {
  if (order_ > cap) throw LimitExceeded("subgroup order exceeds enumeration cap");
  std::vector<Residues> out;
  out.reserve(order_);
  const std::size_t n = label_mod_.size();
  // Each component runs over multiples of p^theta.
  std::vector<std::uint64_t> counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i] = group_->rings()[i].modulus / label_mod_[i];
  Residues digits(n, 0);
  for (std::uint64_t k = 0; k < order_; ++k) {
    Residues e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = digits[i] * label_mod_[i];
    out.push_back(std::move(e));
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < counts[i]) break;
      digits[i] = 0;
    }
  }
  return out;
}

Decomposition Decompose(std::span<const std::uint64_t> cyclic_orders) {
  if (cyclic_orders.empty()) throw InvalidInput("group needs at least one cyclic order");
  struct Part {
    PrimePower pp;
    std::size_t factor;
  };
  std::vector<Part> parts;
  for (std::size_t f = 0; f < cyclic_orders.size(); ++f) {
    const auto n = cyclic_orders[f];
    if (n < 2) throw InvalidInput("cyclic order " + std::to_string(n) + " must be >= 2");
    for (const auto& pp : Factorize(n)) parts.push_back({pp, f});
  }
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Part& a, const Part& b) { return a.pp < b.pp; });

  Decomposition d;
  d.orders_.assign(cyclic_orders.begin(), cyclic_orders.end());
  std::vector<PrimePower> pps;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    pps.push_back(parts[i].pp);
    d.slots_.push_back({parts[i].factor, IntPow(parts[i].pp.p, parts[i].pp.e), i});
  }
  d.group_ = std::make_shared<const GroupSpec>(GroupSpec::FromPrimePowers(std::move(pps)));
  return d;
}

Residues Decomposition::ToCanonical(std::span<const std::uint64_t> user) const {
  if (user.size() != orders_.size()) throw InvalidInput("user element has wrong arity");
  Residues out(group_->num_rings());
  for (const auto& slot : slots_) {
    if (user[slot.factor] >= orders_[slot.factor]) throw InvalidInput("user coordinate out of range");
    out[slot.ring] = user[slot.factor] % slot.modulus;
  }
  return out;
}

std::vector<std::uint64_t> Decomposition::FromCanonical(std::span<const std::uint64_t> canonical) const {
  if (canonical.size() != group_->num_rings()) throw GroupMismatch("canonical element has wrong arity");
  // CRT per user factor.
  std::vector<std::uint64_t> out(orders_.size(), 0);
  for (const auto& slot : slots_) {
    const auto n = orders_[slot.factor];
    const auto m = slot.modulus;
    const auto rest = n / m;
    const auto coef = static_cast<unsigned __int128>(rest) * ModInverse(rest % m, m) % n;
    out[slot.factor] = static_cast<std::uint64_t>(
        (out[slot.factor] + coef * (canonical[slot.ring] % m)) % n);
  }
  return out;
}

std::vector<std::uint64_t> ParseCyclicOrders(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw InvalidInput("cannot parse cyclic order '" + std::string(token) + "'");
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

Decomposition DecomposeString(std::string_view text) {
  const auto orders = ParseCyclicOrders(text);
  return Decompose(orders);
}

}  // namespace abelrate
