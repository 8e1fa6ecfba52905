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

#include "core/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace abelrate {

namespace {

std::uint32_t Gap(std::uint32_t r, std::uint32_t s) { return r > s ? r - s : 0; }

std::uint64_t ModInv(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const auto q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw InvalidInput("value is not invertible");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

std::uint64_t CheckedMul(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != 0 && b > UINT64_MAX / a) throw LimitExceeded(std::string(what) + " overflows 64 bits");
  return a * b;
}

std::string Join(std::span<const std::uint64_t> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

Residues SubtractIn(const GroupSpec& g, std::span<const std::uint64_t> b, std::span<const std::uint64_t> a) {
  Residues d(b.begin(), b.end());
  AddInPlace(g, d, Negate(g, a));
  return d;
}

}  // namespace

std::uint64_t CounterRng::Next() {
  ++counter_;
  std::uint64_t z = seed_ + counter_ * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::Below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("empty sampling range");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const auto x = Next();
    if (x >= threshold) return x % bound;
  }
}

double CounterRng::Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

JSpec::JSpec(std::shared_ptr<const GroupSpec> g, std::vector<std::uint32_t> counts)
    : g_(std::move(g)), counts_(std::move(counts)) {
  const auto& s = g_->s_index();
  if (counts_.size() != s.size()) {
    throw InvalidInput("J needs " + std::to_string(s.size()) + " counts, one per (q,s) in S(G)");
  }
  std::vector<PrimePower> parts;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (counts_[i] > 64) throw LimitExceeded("count k_{q,s} above 64");
    parts.insert(parts.end(), counts_[i], s[i]);
  }
  if (parts.empty()) throw InvalidInput("J is trivial; at least one count must be positive");
  j_ = std::make_shared<const GroupSpec>(GroupSpec::FromPrimePowers(parts));
  for (const auto& ring : j_->rings()) {
    const auto it = std::find(s.begin(), s.end(), PrimePower{ring.p, ring.r});
    slot_of_.push_back(static_cast<std::size_t>(it - s.begin()));
  }
}

std::uint32_t JSpec::total_count() const {
  std::uint32_t k = 0;
  for (auto c : counts_) k += c;
  return k;
}

SupportMask JSpec::support() const {
  SupportMask m = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] > 0) m |= SupportMask{1} << i;
  }
  return m;
}

std::vector<double> JSpec::weights() const {
  std::vector<double> w;
  const double k = total_count();
  for (auto c : counts_) w.push_back(c / k);
  return w;
}

std::string JSpec::ToString() const {
  std::ostringstream os;
  os << "k=(";
  for (std::size_t i = 0; i < counts_.size(); ++i) os << (i ? "," : "") << counts_[i];
  os << ") J=" << j_->ToString();
  return os.str();
}

std::vector<std::uint32_t> ParseCounts(const GroupSpec& g, const std::string& text) {
  std::vector<std::uint32_t> out;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw InvalidInput("count '" + token + "' is not a nonnegative integer");
    }
  }
  if (out.size() != g.s_index().size()) {
    throw InvalidInput("expected " + std::to_string(g.s_index().size()) + " counts over S(G), got " +
                       std::to_string(out.size()));
  }
  return out;
}

std::uint64_t PowerOrder(const GroupSpec& g, std::size_t n) {
  std::uint64_t out = 1;
  for (std::size_t t = 0; t < n; ++t) out = CheckedMul(out, g.order(), "|G|^n");
  return out;
}

std::uint64_t PowerIndex(const GroupSpec& g, std::span<const std::uint64_t> x) {
  const auto R = g.num_rings();
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < x.size(); ++k) index = index * g.rings()[k % R].modulus + x[k];
  return index;
}

Residues PowerElementAt(const GroupSpec& g, std::size_t n, std::uint64_t index) {
  const auto R = g.num_rings();
  Residues x(n * R);
  for (std::size_t k = x.size(); k-- > 0;) {
    const auto m = g.rings()[k % R].modulus;
    x[k] = index % m;
    index /= m;
  }
  return x;
}

ImageSet AllowedImages(const Ring& j_ring, const Ring& g_ring) {
  if (j_ring.p != g_ring.p) return {g_ring.modulus, 1};
  if (g_ring.r <= j_ring.r) return {1, g_ring.modulus};
  return {IntPow(g_ring.p, g_ring.r - j_ring.r), IntPow(g_ring.p, j_ring.r)};
}

HomomorphismTable SampleHom(const JSpec& j, std::size_t n, CounterRng& rng) {
  if (n == 0) throw InvalidInput("blocklength must be positive");
  const auto& g = j.group();
  const auto R = g.num_rings();
  HomomorphismTable h;
  h.n = n;
  h.images.assign(j.input().num_rings(), std::vector<std::uint64_t>(n * R, 0));
  for (std::size_t jr = 0; jr < j.input().num_rings(); ++jr) {
    for (std::size_t k = 0; k < n * R; ++k) {
      const auto set = AllowedImages(j.input().rings()[jr], g.rings()[k % R]);
      h.images[jr][k] = set.count == 1 ? 0 : set.step * rng.Below(set.count);
    }
  }
  h.dither.resize(n * R);
  for (std::size_t k = 0; k < n * R; ++k) h.dither[k] = rng.Below(g.rings()[k % R].modulus);
  return h;
}

bool SatisfiesImageConstraints(const JSpec& j, const HomomorphismTable& h) {
  const auto& g = j.group();
  const auto R = g.num_rings();
  if (h.images.size() != j.input().num_rings() || h.dither.size() != h.n * R) return false;
  for (std::size_t jr = 0; jr < h.images.size(); ++jr) {
    for (std::size_t k = 0; k < h.n * R; ++k) {
      const auto& ring = g.rings()[k % R];
      const auto set = AllowedImages(j.input().rings()[jr], ring);
      const auto v = h.images[jr][k];
      if (v >= ring.modulus || v % set.step != 0) return false;
    }
  }
  for (std::size_t k = 0; k < h.n * R; ++k) {
    if (h.dither[k] >= g.rings()[k % R].modulus) return false;
  }
  return true;
}

Residues ApplyHom(const JSpec& j, const HomomorphismTable& h, std::span<const std::uint64_t> a) {
  const auto& g = j.group();
  const auto R = g.num_rings();
  Residues out(h.n * R, 0);
  for (std::size_t jr = 0; jr < a.size(); ++jr) {
    if (a[jr] == 0) continue;
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto m = g.rings()[k % R].modulus;
      out[k] = (out[k] + a[jr] % m * h.images[jr][k]) % m;
    }
  }
  return out;
}

Residues Encode(const JSpec& j, const HomomorphismTable& h, std::span<const std::uint64_t> a) {
  auto x = ApplyHom(j, h, a);
  const auto& g = j.group();
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = (x[k] + h.dither[k]) % g.rings()[k % g.num_rings()].modulus;
  return x;
}

std::uint32_t Depth(std::uint64_t x, std::uint32_t p, std::uint32_t e) {
  x %= IntPow(p, e);
  if (x == 0) return e;
  std::uint32_t d = 0;
  while (x % p == 0) {
    x /= p;
    ++d;
  }
  return d;
}

ThetaVector ThetaOfPair(const JSpec& j, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  const auto d = SubtractIn(j.input(), b, a);
  ThetaVector theta;
  for (const auto& pr : j.group().q_index()) {
    std::uint32_t best = pr.e;
    for (std::size_t jr = 0; jr < d.size(); ++jr) {
      const auto& ring = j.input().rings()[jr];
      if (ring.p != pr.p) continue;
      best = std::min(best, Gap(pr.e, ring.r) + Depth(d[jr], ring.p, ring.r));
    }
    theta.push_back(best);
  }
  return theta;
}

std::map<ThetaVector, std::uint64_t> CountTTheta(const JSpec& j, std::span<const std::uint64_t> a) {
  j.input().CheckEnumerable();
  std::map<ThetaVector, std::uint64_t> out;
  for (std::uint64_t idx = 0; idx < j.size(); ++idx) ++out[ThetaOfPair(j, a, j.input().ElementAt(idx))];
  return out;
}

std::uint64_t TBound(const JSpec& j, const ThetaVector& theta) {
  const auto a = OmegaCoefficients(j.group(), theta);
  std::uint64_t bound = 1;
  for (std::size_t jr = 0; jr < j.input().num_rings(); ++jr) {
    const auto& ring = j.input().rings()[jr];
    bound = CheckedMul(bound, IntPow(ring.p, ring.r - a[j.slot_of(jr)]), "T bound");
  }
  return bound;
}

std::vector<ThetaVector> BruteTheta(const JSpec& j) {
  const Residues zero(j.input().num_rings(), 0);
  std::vector<ThetaVector> out;
  for (const auto& [theta, count] : CountTTheta(j, zero)) out.push_back(theta);
  return out;
}

std::vector<std::uint64_t> CongruenceSolutions(std::uint32_t p, std::uint32_t r, std::uint64_t a,
                                               std::uint64_t b, std::uint64_t alpha, std::uint64_t beta) {
  const auto mod = IntPow(p, r);
  a %= mod;
  b %= mod;
  if (a == 0) throw InvalidInput("congruence coefficient must be nonzero");
  const auto da = Depth(a, p, r), db = Depth(b, p, r);
  if (alpha % p == 0) throw InvalidInput("alpha must be a unit");
  if (IntPow(p, da) * (alpha % mod) % mod != a) throw InvalidInput("a != p^depth(a) * alpha");
  if (IntPow(p, db) % mod * (beta % mod) % mod != b) throw InvalidInput("b != p^depth(b) * beta");
  if (db < da) return {};
  const auto inv = ModInv(alpha % mod, mod);
  const auto base = IntPow(p, db - da) * inv % mod * (beta % mod) % mod;
  const auto stride = inv * IntPow(p, r - da) % mod;
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < IntPow(p, da); ++i) out.push_back((base + i * stride) % mod);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> SolveCongruence(std::uint32_t p, std::uint32_t r, std::uint32_t s, std::uint64_t a,
                                           std::uint64_t b) {
  if (!IsPrime(p)) throw InvalidInput("p must be prime");
  if (s == 0 || s > r) throw InvalidInput("need 1 <= s <= r");
  if (a == 0 || a >= IntPow(p, s)) throw InvalidInput("a must lie in Z_{p^s} \\ {0}");
  if (b >= IntPow(p, r)) throw InvalidInput("b must lie in Z_{p^r}");
  const auto da = Depth(a, p, r), db = Depth(b, p, r);
  return CongruenceSolutions(p, r, a, b, a / IntPow(p, da), b == 0 ? 0 : b / IntPow(p, db));
}

std::vector<std::uint64_t> SolveCongruenceBrute(std::uint32_t p, std::uint32_t r, std::uint64_t a,
                                                std::uint64_t b) {
  const auto mod = IntPow(p, r);
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < mod; ++x) {
    if (a % mod * x % mod == b % mod) out.push_back(x);
  }
  return out;
}

namespace {

std::uint64_t HPowerOrder(const GroupSpec& g, const ThetaVector& theta, std::size_t n) {
  std::uint64_t one = 1;
  for (std::size_t i = 0; i < g.num_rings(); ++i) {
    const auto& ring = g.rings()[i];
    one *= IntPow(ring.p, ring.r - theta[g.q_slot_of_ring(i)]);
  }
  std::uint64_t out = 1;
  for (std::size_t t = 0; t < n; ++t) out = CheckedMul(out, one, "|H|^n");
  return out;
}

bool InHPower(const GroupSpec& g, const ThetaVector& theta, std::span<const std::uint64_t> x) {
  const auto R = g.num_rings();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto& ring = g.rings()[k % R];
    if (Depth(x[k], ring.p, ring.r) < theta[g.q_slot_of_ring(k % R)]) return false;
  }
  return true;
}

// Number of distinct homomorphism tables.
std::uint64_t TableCount(const JSpec& j, std::size_t n) {
  const auto& g = j.group();
  std::uint64_t out = 1;
  for (const auto& jr : j.input().rings()) {
    for (std::size_t k = 0; k < n * g.num_rings(); ++k) {
      out = CheckedMul(out, AllowedImages(jr, g.rings()[k % g.num_rings()]).count, "table count");
    }
  }
  return out;
}

HomomorphismTable TableAt(const JSpec& j, std::size_t n, std::uint64_t index) {
  const auto& g = j.group();
  const auto R = g.num_rings();
  HomomorphismTable h;
  h.n = n;
  h.images.assign(j.input().num_rings(), std::vector<std::uint64_t>(n * R, 0));
  for (std::size_t jr = 0; jr < h.images.size(); ++jr) {
    for (std::size_t k = 0; k < n * R; ++k) {
      const auto set = AllowedImages(j.input().rings()[jr], g.rings()[k % R]);
      h.images[jr][k] = set.step * (index % set.count) % g.rings()[k % R].modulus;
      index /= set.count;
    }
  }
  h.dither.assign(n * R, 0);
  return h;
}

void LiteralLaw(const JSpec& j, std::size_t n, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                PairwiseReport& report) {
  const auto& g = j.group();
  const auto gn = PowerOrder(g, n);
  const auto hn = HPowerOrder(g, report.theta, n);
  const auto tables = TableCount(j, n);
  std::vector<std::uint64_t> counts(gn * gn, 0);
  for (std::uint64_t ti = 0; ti < tables; ++ti) {
    const auto h = TableAt(j, n, ti);
    const auto fa = ApplyHom(j, h, a), fb = ApplyHom(j, h, b);
    for (std::uint64_t bi = 0; bi < gn; ++bi) {
      const auto dither = PowerElementAt(g, n, bi);
      auto u = fa, v = fb;
      for (std::size_t k = 0; k < u.size(); ++k) {
        const auto m = g.rings()[k % g.num_rings()].modulus;
        u[k] = (u[k] + dither[k]) % m;
        v[k] = (v[k] + dither[k]) % m;
      }
      ++counts[PowerIndex(g, u) * gn + PowerIndex(g, v)];
    }
  }
  const auto total = tables * gn;
  for (std::uint64_t u = 0; u < gn; ++u) {
    const auto ue = PowerElementAt(g, n, u);
    for (std::uint64_t v = 0; v < gn; ++v) {
      const auto ve = PowerElementAt(g, n, v);
      Residues diff(ve);
      for (std::size_t k = 0; k < diff.size(); ++k) {
        const auto m = g.rings()[k % g.num_rings()].modulus;
        diff[k] = (ve[k] + m - ue[k]) % m;
      }
      const auto c = counts[u * gn + v];
      const bool ok = InHPower(g, report.theta, diff) ? c * gn * hn == total : c == 0;
      if (!ok) ++report.violations;
    }
  }
  report.method = "literal";
  report.support_cells = gn * hn;
}

// phi(b) - phi(a) = phi(b - a) is independent across coordinates of G^n and
// B is uniform and independent of phi, so the pair law is exact iff every
// coordinate of phi(b - a) is uniform on p^theta Z_{p^r}.
void FactorizedLaw(const JSpec& j, std::size_t n, std::span<const std::uint64_t> a,
                   std::span<const std::uint64_t> b, PairwiseReport& report) {
  const auto& g = j.group();
  const auto R = g.num_rings();
  const auto d = SubtractIn(j.input(), b, a);
  for (std::size_t k = 0; k < n * R; ++k) {
    const auto& ring = g.rings()[k % R];
    const auto theta = report.theta[g.q_slot_of_ring(k % R)];
    std::vector<std::size_t> active;
    std::vector<ImageSet> sets;
    std::uint64_t combos = 1;
    for (std::size_t jr = 0; jr < d.size(); ++jr) {
      const auto set = AllowedImages(j.input().rings()[jr], ring);
      if (set.count == 1) continue;
      active.push_back(jr);
      sets.push_back(set);
      combos = CheckedMul(combos, set.count, "coordinate table count");
    }
    if (combos > kDefaultEnumerationCap) throw LimitExceeded("coordinate table count above 2^20");
    std::vector<std::uint64_t> counts(ring.modulus, 0);
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::uint64_t rest = c, v = 0;
      for (std::size_t x = 0; x < active.size(); ++x) {
        const auto image = sets[x].step * (rest % sets[x].count);
        rest /= sets[x].count;
        v = (v + d[active[x]] % ring.modulus * image) % ring.modulus;
      }
      ++counts[v];
    }
    const auto h_size = IntPow(ring.p, ring.r - theta);
    for (std::uint64_t v = 0; v < ring.modulus; ++v) {
      const bool ok = Depth(v, ring.p, ring.r) >= theta ? counts[v] * h_size == combos : counts[v] == 0;
      if (!ok) ++report.violations;
    }
  }
  report.method = "factorized";
  report.support_cells = CheckedMul(PowerOrder(g, n), HPowerOrder(g, report.theta, n), "support size");
}

void SampledLaw(const JSpec& j, std::size_t n, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                const PairwiseOptions& options, PairwiseReport& report) {
  const auto& g = j.group();
  const auto gn = PowerOrder(g, n);
  if (gn > (std::uint64_t{1} << 8)) throw LimitExceeded("sampled pair law needs |G|^(2n) <= 2^16");
  const auto hn = HPowerOrder(g, report.theta, n);
  std::vector<std::uint64_t> counts(gn * gn, 0);
  CounterRng rng(options.seed);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    const auto h = SampleHom(j, n, rng);
    ++counts[PowerIndex(g, Encode(j, h, a)) * gn + PowerIndex(g, Encode(j, h, b))];
  }
  const double cell_p = 1.0 / static_cast<double>(gn * hn);
  double tv = 0.0;
  for (std::uint64_t u = 0; u < gn; ++u) {
    const auto ue = PowerElementAt(g, n, u);
    for (std::uint64_t v = 0; v < gn; ++v) {
      const auto ve = PowerElementAt(g, n, v);
      Residues diff(ve.size());
      for (std::size_t k = 0; k < diff.size(); ++k) {
        const auto m = g.rings()[k % g.num_rings()].modulus;
        diff[k] = (ve[k] + m - ue[k]) % m;
      }
      const double freq = static_cast<double>(counts[u * gn + v]) / static_cast<double>(options.samples);
      if (InHPower(g, report.theta, diff)) {
        tv += std::abs(freq - cell_p);
      } else {
        tv += freq;
        if (counts[u * gn + v] > 0) ++report.violations;
      }
    }
  }
  report.method = "sampled";
  report.support_cells = gn * hn;
  report.tv = 0.5 * tv;
  report.tv_bound = 3.0 * std::sqrt(static_cast<double>(gn * gn) / static_cast<double>(options.samples));
}

}  // namespace

PairwiseReport VerifyPairwiseLaw(const JSpec& j, std::size_t n, std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b, const PairwiseOptions& options) {
  if (n == 0) throw InvalidInput("blocklength must be positive");
  if (a.size() != j.input().num_rings() || b.size() != j.input().num_rings()) {
    throw InvalidInput("message does not belong to J");
  }
  PairwiseReport report;
  report.theta = ThetaOfPair(j, a, b);
  if (options.samples > 0) {
    SampledLaw(j, n, a, b, options, report);
    report.passed = report.violations == 0 && report.tv <= report.tv_bound;
    return report;
  }
  const auto gn = PowerOrder(j.group(), n);
  bool literal = false;
  try {
    const auto tables = TableCount(j, n);
    literal = gn <= (std::uint64_t{1} << 8) && CheckedMul(tables, gn, "(g,B) space") <= options.literal_cap;
  } catch (const LimitExceeded&) {
    literal = false;
  }
  if (literal) {
    LiteralLaw(j, n, a, b, report);
  } else {
    FactorizedLaw(j, n, a, b, report);
  }
  report.passed = report.violations == 0;
  return report;
}

bool EnsembleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.violations == 0; });
}

LemmaCheck VerifyCongruences(std::uint32_t p, std::uint32_t r) {
  LemmaCheck check{"congruence", "exhaustive", 0, 0, ""};
  const auto mod = IntPow(p, r);
  auto fail = [&](const std::string& what) {
    if (check.violations++ == 0) check.detail = what;
  };
  for (std::uint64_t a = 1; a < mod; ++a) {
    const auto da = Depth(a, p, r);
    for (std::uint64_t b = 0; b < mod; ++b) {
      const auto db = Depth(b, p, r);
      const auto brute = SolveCongruenceBrute(p, r, a, b);
      const std::string tag = "p=" + std::to_string(p) + " r=" + std::to_string(r) + " a=" + std::to_string(a) +
                              " b=" + std::to_string(b);
      std::uint32_t s = 1;
      while (a >= IntPow(p, s)) ++s;
      ++check.checked;
      if (SolveCongruence(p, r, s, a, b) != brute) fail(tag);
      if (brute.empty() != (db < da)) fail(tag + " emptiness");
      if (!brute.empty() && brute.size() != IntPow(p, da)) fail(tag + " size");
      for (std::uint64_t alpha = 1; alpha < mod; ++alpha) {
        if (alpha % p == 0 || IntPow(p, da) * alpha % mod != a) continue;
        for (std::uint64_t beta = 0; beta < mod; ++beta) {
          if (IntPow(p, db) % mod * beta % mod != b) continue;
          ++check.checked;
          if (CongruenceSolutions(p, r, a, b, alpha, beta) != brute) {
            fail(tag + " alpha=" + std::to_string(alpha) + " beta=" + std::to_string(beta));
          }
        }
      }
    }
  }
  return check;
}

EnsembleReport VerifyEnsemble(const JSpec& j, std::size_t n, const EnsembleOptions& options) {
  if (n == 0) throw InvalidInput("blocklength must be positive");
  const auto& g = j.group();
  const auto& input = j.input();
  input.CheckEnumerable();
  const auto gn = PowerOrder(g, n);
  if (CheckedMul(j.size(), gn, "|J| |G|^n") > kDefaultEnumerationCap) {
    throw LimitExceeded("|J| |G|^n exceeds 2^20");
  }
  EnsembleReport report;
  report.config = "G=" + g.ToString() + " " + j.ToString();
  report.n = n;
  auto fail = [](LemmaCheck& c, const std::string& what) {
    if (c.violations++ == 0) c.detail = what;
  };

  const bool all_pairs = CheckedMul(j.size(), j.size(), "|J|^2") <= options.pair_cap;
  std::vector<Residues> elements;
  for (std::uint64_t x = 0; x < j.size(); ++x) elements.push_back(input.ElementAt(x));
  const std::uint64_t first_count = all_pairs ? j.size() : 1;

  {
    LemmaCheck images{"image-constraints", "sampled", 0, 0, ""};
    LemmaCheck hom{"homomorphism", all_pairs ? "sampled tables, all pairs" : "sampled tables, pairs (0,b)", 0, 0, ""};
    CounterRng rng(options.seed);
    for (std::uint64_t t = 0; t < options.tables; ++t) {
      const auto h = SampleHom(j, n, rng);
      ++images.checked;
      if (!SatisfiesImageConstraints(j, h)) fail(images, "table " + std::to_string(t));
      std::vector<Residues> phi;
      for (const auto& x : elements) phi.push_back(ApplyHom(j, h, x));
      if (std::any_of(phi.front().begin(), phi.front().end(), [](auto v) { return v != 0; })) {
        fail(hom, "phi(0) != 0 in table " + std::to_string(t));
      }
      for (std::uint64_t x = 0; x < first_count; ++x) {
        for (std::uint64_t y = 0; y < j.size(); ++y) {
          auto sum = elements[x];
          AddInPlace(input, sum, elements[y]);
          auto expect = phi[x];
          for (std::size_t k = 0; k < expect.size(); ++k) {
            expect[k] = (expect[k] + phi[y][k]) % g.rings()[k % g.num_rings()].modulus;
          }
          ++hom.checked;
          if (phi[input.IndexOf(sum)] != expect) {
            fail(hom, "a=" + Join(elements[x]) + " b=" + Join(elements[y]) + " table " + std::to_string(t));
          }
        }
      }
    }
    report.checks.push_back(std::move(images));
    report.checks.push_back(std::move(hom));
  }

  {
    LemmaCheck law{"pairwise-law", "", 0, 0, ""};
    PairwiseOptions po;
    const auto pairs = first_count * j.size();
    po.literal_cap = std::max<std::uint64_t>(1, options.literal_budget / pairs);
    std::set<std::string> methods;
    for (std::uint64_t x = 0; x < first_count; ++x) {
      for (std::uint64_t y = 0; y < j.size(); ++y) {
        const auto r = VerifyPairwiseLaw(j, n, elements[x], elements[y], po);
        methods.insert(r.method);
        ++law.checked;
        if (!r.passed) {
          fail(law, "a=" + Join(elements[x]) + " b=" + Join(elements[y]) + " theta=" + ThetaToString(r.theta));
        }
      }
    }
    for (const auto& m : methods) law.method += (law.method.empty() ? "" : "+") + m;
    law.method += all_pairs ? ", all pairs" : ", pairs (0,b)";
    report.checks.push_back(std::move(law));
  }

  {
    LemmaCheck bound{"t-bound", all_pairs ? "exhaustive, all a" : "exhaustive, a=0", 0, 0, ""};
    for (std::uint64_t x = 0; x < first_count; ++x) {
      const auto counts = CountTTheta(j, elements[x]);
      for (const auto& [theta, count] : counts) {
        ++bound.checked;
        if (count > TBound(j, theta)) {
          fail(bound, "a=" + Join(elements[x]) + " theta=" + ThetaToString(theta) + " count=" +
                          std::to_string(count) + " bound=" + std::to_string(TBound(j, theta)));
        }
      }
      const auto full = counts.find(FullTheta(g));
      ++bound.checked;
      if (full == counts.end() || full->second != 1) fail(bound, "T_r(a) != {a} at a=" + Join(elements[x]));
    }
    report.checks.push_back(std::move(bound));
  }

  {
    LemmaCheck set{"theta-set", "exhaustive", 0, 0, ""};
    if (CoversAllPrimes(g, j.support())) {
      ++set.checked;
      if (BruteTheta(j) != EnumerateTheta(g, j.support())) fail(set, "brute-force set differs");
    } else {
      set.method = "skipped";
      set.detail = "J does not reach every prime of G";
    }
    report.checks.push_back(std::move(set));
  }

  if (options.congruences) {
    LemmaCheck cong{"congruence", "exhaustive", 0, 0, ""};
    for (auto p : g.primes()) {
      for (std::uint32_t r = 1; r <= g.max_exponent(p); ++r) {
        const auto c = VerifyCongruences(p, r);
        cong.checked += c.checked;
        if (c.violations > 0 && cong.violations == 0) cong.detail = c.detail;
        cong.violations += c.violations;
      }
    }
    report.checks.push_back(std::move(cong));
  }

  if (options.samples > 0) {
    LemmaCheck sampled{"pairwise-law-sampled", "sampled", 0, 0, ""};
    if (gn > (std::uint64_t{1} << 8)) {
      sampled.method = "skipped";
      sampled.detail = "|G|^(2n) above 2^16";
    } else {
      std::set<ThetaVector> seen;
      std::uint64_t k = 0;
      for (std::uint64_t y = 0; y < j.size(); ++y) {
        const auto theta = ThetaOfPair(j, elements[0], elements[y]);
        if (!seen.insert(theta).second) continue;
        PairwiseOptions po;
        po.samples = options.samples;
        po.seed = options.seed + 1 + k++;
        const auto r = VerifyPairwiseLaw(j, n, elements[0], elements[y], po);
        ++sampled.checked;
        if (!r.passed) {
          std::ostringstream os;
          os << "b=" << Join(elements[y]) << " tv=" << r.tv << " bound=" << r.tv_bound
             << " off-support=" << r.violations;
          fail(sampled, os.str());
        }
      }
    }
    report.checks.push_back(std::move(sampled));
  }
  return report;
}

SimulationResult McChannelError(const JSpec& j, std::size_t n, const ChannelSpec& channel, std::uint64_t trials,
                                std::uint64_t seed) {
  const auto& g = j.group();
  if (!(channel.group() == g)) throw InvalidInput("channel group differs from the code group");
  if (trials == 0) throw InvalidInput("need at least one trial");
  const auto gn = PowerOrder(g, n);
  if (CheckedMul(j.size(), gn, "|J| |G|^n") > kDefaultEnumerationCap) {
    throw LimitExceeded("|J| |G|^n exceeds 2^20");
  }
  const auto R = g.num_rings();
  const auto& w = channel.transition();
  std::vector<Residues> messages;
  for (std::uint64_t x = 0; x < j.size(); ++x) messages.push_back(j.input().ElementAt(x));

  CounterRng rng(seed);
  SimulationResult out;
  out.trials = trials;
  std::vector<std::vector<std::uint64_t>> code(j.size(), std::vector<std::uint64_t>(n));
  std::vector<std::uint64_t> received(n);
  std::vector<std::uint64_t> ties;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const auto h = SampleHom(j, n, rng);
    for (std::uint64_t x = 0; x < j.size(); ++x) {
      const auto cw = Encode(j, h, messages[x]);
      for (std::size_t t = 0; t < n; ++t) code[x][t] = g.IndexOf(std::span(cw).subspan(t * R, R));
    }
    const auto sent = rng.Below(j.size());
    for (std::size_t t = 0; t < n; ++t) {
      const auto row = w.row(code[sent][t]);
      const double u = rng.Unit();
      double acc = 0.0;
      std::size_t y = 0, last = 0;
      for (; y < row.size(); ++y) {
        if (row[y] > 0.0) last = y;
        acc += row[y];
        if (u < acc) break;
      }
      received[t] = y < row.size() ? y : last;
    }
    double best = -1.0;
    ties.clear();
    for (std::uint64_t x = 0; x < j.size(); ++x) {
      double like = 1.0;
      for (std::size_t t = 0; t < n; ++t) like *= w(code[x][t], received[t]);
      if (like > best) {
        best = like;
        ties.assign(1, x);
      } else if (like == best) {
        ties.push_back(x);
      }
    }
    const auto decoded = ties.size() == 1 ? ties.front() : ties[rng.Below(ties.size())];
    if (decoded != sent) ++out.errors;
  }
  out.rate = static_cast<double>(out.errors) / static_cast<double>(trials);
  out.std_error = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(trials));
  return out;
}

}  // namespace abelrate
