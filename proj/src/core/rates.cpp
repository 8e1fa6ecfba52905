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

#include "core/rates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace abelrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Information values below this are rounding noise and count as exact zeros.
constexpr double kInfoZero = 1e-13;

std::uint32_t PositivePart(std::int64_t x) { return x > 0 ? static_cast<std::uint32_t>(x) : 0; }

// (r - s)^+
std::uint32_t Gap(std::uint32_t r, std::uint32_t s) { return r > s ? r - s : 0; }

}  // namespace

SupportMask FullSupport(const GroupSpec& g) {
  const auto n = g.s_index().size();
  if (n >= 32) throw LimitExceeded("S(G) has too many slots for a support mask");
  return static_cast<SupportMask>((std::uint64_t{1} << n) - 1);
}

bool CoversAllPrimes(const GroupSpec& g, SupportMask support) {
  for (auto p : g.primes()) {
    bool covered = false;
    for (std::size_t i = 0; i < g.s_index().size(); ++i) {
      covered = covered || ((support >> i) & 1U && g.s_index()[i].p == p);
    }
    if (!covered) return false;
  }
  return true;
}

std::vector<SupportMask> AdmissibleSupports(const GroupSpec& g) {
  std::vector<SupportMask> out;
  const auto full = FullSupport(g);
  for (SupportMask m = 1; m <= full && m != 0; ++m) {
    if (CoversAllPrimes(g, m)) out.push_back(m);
  }
  return out;
}

SupportMask SupportOf(const GroupSpec& g, std::span<const double> w) {
  ValidateWeights(g, w);
  SupportMask m = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) m |= SupportMask{1} << i;
  }
  return m;
}

std::string SupportToString(const GroupSpec& g, SupportMask support) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < g.s_index().size(); ++i) {
    if (!((support >> i) & 1U)) continue;
    os << (first ? "" : ",") << g.s_index()[i].p << ':' << g.s_index()[i].e;
    first = false;
  }
  return os.str();
}

SupportMask ParseSupport(const GroupSpec& g, const std::string& text) {
  SupportMask m = 0;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw InvalidInput("support entry '" + token + "' is not q:s");
    PrimePower pp{};
    try {
      pp = {static_cast<std::uint32_t>(std::stoul(token.substr(0, colon))),
            static_cast<std::uint32_t>(std::stoul(token.substr(colon + 1)))};
    } catch (const std::exception&) {
      throw InvalidInput("support entry '" + token + "' is not q:s");
    }
    const auto& s = g.s_index();
    auto it = std::find(s.begin(), s.end(), pp);
    if (it == s.end()) throw InvalidInput("support entry '" + token + "' is not in S(G)");
    m |= SupportMask{1} << (it - s.begin());
  }
  if (m == 0) throw InvalidInput("support is empty");
  return m;
}

ThetaVector ThetaOfThetaHat(const GroupSpec& g, SupportMask support,
                            std::span<const std::uint32_t> thetahat) {
  const auto& s_index = g.s_index();
  if (thetahat.size() != s_index.size()) throw InvalidInput("thetahat must be indexed by S(G)");
  ThetaVector theta;
  for (const auto& pr : g.q_index()) {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t i = 0; i < s_index.size(); ++i) {
      if (!((support >> i) & 1U) || s_index[i].p != pr.p) continue;
      if (thetahat[i] > s_index[i].e) throw InvalidInput("thetahat component exceeds s");
      best = std::min(best, Gap(pr.e, s_index[i].e) + thetahat[i]);
    }
    if (best == std::numeric_limits<std::uint32_t>::max()) {
      throw InvalidInput("prime " + std::to_string(pr.p) +
                         " has no supported weight; theta component is undefined");
    }
    theta.push_back(std::min(best, pr.e));
  }
  return theta;
}

std::vector<ThetaVector> EnumerateTheta(const GroupSpec& g, SupportMask support) {
  if (!CoversAllPrimes(g, support)) {
    throw InvalidInput("support " + SupportToString(g, support) + " does not cover every prime");
  }
  const auto& s_index = g.s_index();
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < s_index.size(); ++i) {
    if ((support >> i) & 1U) slots.push_back(i);
  }
  std::set<ThetaVector> seen;
  std::vector<std::uint32_t> hat(s_index.size(), 0);
  while (true) {
    seen.insert(ThetaOfThetaHat(g, support, hat));
    std::size_t k = 0;
    for (; k < slots.size(); ++k) {
      auto& digit = hat[slots[k]];
      if (digit < s_index[slots[k]].e) {
        ++digit;
        break;
      }
      digit = 0;
    }
    if (k == slots.size()) break;
  }
  return {seen.begin(), seen.end()};
}

std::vector<ThetaVector> AllThetas(const GroupSpec& g) {
  std::vector<ThetaVector> out;
  ThetaVector theta = ZeroTheta(g);
  const auto& q = g.q_index();
  while (true) {
    out.push_back(theta);
    std::size_t k = q.size();
    while (k > 0) {
      --k;
      if (theta[k] < q[k].e) {
        ++theta[k];
        break;
      }
      theta[k] = 0;
      if (k == 0) return out;
    }
  }
}

std::vector<std::uint32_t> OmegaCoefficients(const GroupSpec& g, const ThetaVector& theta) {
  ValidateTheta(g, theta);
  std::vector<std::uint32_t> a;
  for (const auto& qs : g.s_index()) {
    std::uint32_t best = 0;
    for (std::size_t k = 0; k < g.q_index().size(); ++k) {
      const auto& pr = g.q_index()[k];
      if (pr.p != qs.p) continue;
      best = std::max(best, PositivePart(static_cast<std::int64_t>(theta[k]) - Gap(pr.e, qs.e)));
    }
    a.push_back(best);
  }
  return a;
}

void ValidateWeights(const GroupSpec& g, std::span<const double> w) {
  if (w.size() != g.s_index().size()) {
    throw InvalidInput("weight vector has " + std::to_string(w.size()) + " entries, S(G) has " +
                       std::to_string(g.s_index().size()));
  }
  double total = 0.0;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("weights must be finite and >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) throw InvalidInput("weights must sum to 1");
}

double Omega(const GroupSpec& g, std::span<const double> w, const ThetaVector& theta) {
  ValidateWeights(g, w);
  const auto a = OmegaCoefficients(g, theta);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double logq = std::log2(static_cast<double>(g.s_index()[i].p));
    num += a[i] * w[i] * logq;
    den += g.s_index()[i].e * w[i] * logq;
  }
  return num / den;
}

Rational OmegaExact(const GroupSpec& g, std::span<const Rational> w, const ThetaVector& theta) {
  if (g.primes().size() != 1) throw InvalidInput("exact omega needs a single-prime group");
  if (w.size() != g.s_index().size()) throw InvalidInput("weight vector must be indexed by S(G)");
  const auto a = OmegaCoefficients(g, theta);
  Rational num = 0, den = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0) throw InvalidInput("weights must be >= 0");
    num += a[i] * w[i];
    den += g.s_index()[i].e * w[i];
  }
  if (den == 0) throw InvalidInput("weights are all zero");
  return num / den;
}

TermTable SourceTerms(const SourceJoint& j) {
  TermTable out;
  for (const auto& theta : AllThetas(j.group())) out.emplace(theta, CosetMiSource(j, theta));
  return out;
}

TermTable ChannelTerms(const ChannelSpec& c) {
  TermTable out;
  for (const auto& theta : AllThetas(c.group())) out.emplace(theta, CosetMiChannel(c, theta));
  return out;
}

namespace {

double TermInfo(const TermTable& terms, const ThetaVector& theta) {
  auto it = terms.find(theta);
  if (it == terms.end()) throw InvalidInput("term table has no entry for theta " + ThetaToString(theta));
  return it->second;
}

bool IsExcluded(const GroupSpec& g, Sense sense, const ThetaVector& theta) {
  return sense == Sense::kSource ? theta == ZeroTheta(g) : theta == FullTheta(g);
}

// Ratio of one term given the information value and the numerator/denominator
// of the relevant weight fraction (omega for source, 1 - omega for channel).
double TermRatio(Sense sense, double info, double frac_num, double frac_den, bool frac_is_zero) {
  if (frac_is_zero) {
    // Vacuous constraint: neutral for the outer max (source) or min (channel).
    if (sense == Sense::kSource) return info > 0.0 ? kInf : 0.0;
    return kInf;
  }
  return info * frac_den / frac_num;
}

// One admissible support, in the normalized variables v_i = w_i log q_i.
struct Subproblem {
  struct Row {
    ThetaVector theta;
    std::vector<std::uint32_t> a;  // omega numerator coefficients on the support
    double info;
    Rational info_exact;
  };

  Sense sense;
  std::vector<std::size_t> slots;  // s_index() positions on the support
  std::vector<std::uint32_t> s;    // exponents on the support
  std::vector<Row> rows;           // binding rows only
  bool forced_infinite = false;    // source: a term with positive info can never be met
  bool forced_zero = false;        // channel: a term with zero info always binds

  std::vector<LinearRow> Constraints(double t) const {
    const Rational tt = ExactRational(t);
    std::vector<LinearRow> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      LinearRow lr(slots.size());
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (sense == Sense::kSource) {
          lr[i] = tt * row.a[i] - row.info_exact * s[i];
        } else {
          lr[i] = row.info_exact * s[i] - tt * (s[i] - row.a[i]);
        }
      }
      out.push_back(std::move(lr));
    }
    return out;
  }

  std::optional<std::vector<Rational>> Feasible(double t) const {
    return FindSimplexPoint(Constraints(t), slots.size());
  }

  // Objective at v with exact zero tests on the weight fractions.
  double Evaluate(const std::vector<Rational>& v) const {
    Rational d = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) d += s[i] * v[i];
    double best = sense == Sense::kSource ? 0.0 : kInf;
    for (const auto& row : rows) {
      Rational n = 0;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        n += (sense == Sense::kSource ? row.a[i] : s[i] - row.a[i]) * v[i];
      }
      const double ratio =
          n == 0 ? TermRatio(sense, row.info, 0, 0, true)
                 : static_cast<double>(row.info_exact * d / n);
      best = sense == Sense::kSource ? std::max(best, ratio) : std::min(best, ratio);
    }
    return best;
  }
};

Subproblem BuildSubproblem(const GroupSpec& g, const TermTable& terms, Sense sense, SupportMask support) {
  Subproblem sp;
  sp.sense = sense;
  for (std::size_t i = 0; i < g.s_index().size(); ++i) {
    if ((support >> i) & 1U) {
      sp.slots.push_back(i);
      sp.s.push_back(g.s_index()[i].e);
    }
  }
  for (const auto& theta : EnumerateTheta(g, support)) {
    if (IsExcluded(g, sense, theta)) continue;
    const auto full_a = OmegaCoefficients(g, theta);
    Subproblem::Row row{theta, {}, TermInfo(terms, theta), 0};
    if (row.info < kInfoZero) row.info = 0.0;
    row.info_exact = ExactRational(row.info);
    bool fraction_vanishes = true;
    for (std::size_t k = 0; k < sp.slots.size(); ++k) {
      row.a.push_back(full_a[sp.slots[k]]);
      const auto coef = sense == Sense::kSource ? row.a.back() : sp.s[k] - row.a.back();
      fraction_vanishes = fraction_vanishes && coef == 0;
    }
    if (fraction_vanishes) {
      // omega == 0 (source) or 1 - omega == 0 (channel) on the whole support.
      if (sense == Sense::kSource && row.info > 0.0) sp.forced_infinite = true;
      continue;
    }
    if (sense == Sense::kSource && row.info == 0.0) continue;
    if (sense == Sense::kChannel && row.info == 0.0) sp.forced_zero = true;
    sp.rows.push_back(std::move(row));
  }
  return sp;
}

struct SupportSolution {
  double value = 0.0;
  std::vector<Rational> v;
  int iterations = 0;
  std::string diagnostic;
};

std::vector<Rational> Barycenter(std::size_t n) { return std::vector<Rational>(n, Rational(1, n)); }

SupportSolution SolveSupport(const Subproblem& sp, const SolverOptions& opt) {
  SupportSolution out;
  const auto bary = Barycenter(sp.slots.size());
  if (sp.sense == Sense::kSource) {
    if (sp.forced_infinite) {
      out.value = kInf;
      out.v = bary;
      out.diagnostic = "a term with positive information has omega = 0 on this support";
      return out;
    }
    if (auto v0 = sp.Feasible(0.0)) {
      out.v = *v0;
      out.value = sp.Evaluate(out.v);
      return out;
    }
    double lo = 0.0, hi = sp.Evaluate(bary);
    auto witness = sp.Feasible(hi);
    for (int k = 0; !witness && k < 64; ++k) {
      hi = hi * (1.0 + 1e-9) + 1e-12;
      witness = sp.Feasible(hi);
    }
    if (!witness) throw SolverError("failed to bracket source subproblem above " + std::to_string(hi));
    while (hi - lo > opt.tolerance) {
      if (++out.iterations > opt.max_iterations) {
        std::ostringstream os;
        os << "bisection did not converge: lo=" << lo << " hi=" << hi << " after " << opt.max_iterations
           << " iterations";
        throw SolverError(os.str());
      }
      const double mid = lo + 0.5 * (hi - lo);
      if (auto v = sp.Feasible(mid)) {
        hi = mid;
        witness = std::move(v);
      } else {
        lo = mid;
      }
    }
    out.v = *witness;
    out.value = sp.Evaluate(out.v);
    return out;
  }

  if (sp.rows.empty()) {
    out.value = kInf;
    out.v = bary;
    out.diagnostic = "no binding constraint on this support; rate is unbounded";
    return out;
  }
  if (sp.forced_zero) {
    // A zero-information term binds everywhere in the relative interior.
    out.value = 0.0;
    out.v = bary;
    return out;
  }
  double lo = sp.Evaluate(bary);
  auto witness = sp.Feasible(lo);
  for (int k = 0; !witness && k < 64; ++k) {
    lo = std::max(0.0, lo * (1.0 - 1e-9) - 1e-12);
    witness = sp.Feasible(lo);
  }
  if (!witness) throw SolverError("failed to bracket channel subproblem below " + std::to_string(lo));
  double hi = std::max(2.0 * lo, lo + 1.0);
  int doublings = 0;
  while (sp.Feasible(hi)) {
    if (++doublings > 64) {
      out.value = kInf;
      out.v = *witness;
      out.diagnostic = "bisection failed to bracket: every tested rate is feasible";
      return out;
    }
    lo = hi;
    witness = sp.Feasible(hi);
    hi *= 2.0;
  }
  while (hi - lo > opt.tolerance) {
    if (++out.iterations > opt.max_iterations) {
      std::ostringstream os;
      os << "bisection did not converge: lo=" << lo << " hi=" << hi << " after " << opt.max_iterations
         << " iterations";
      throw SolverError(os.str());
    }
    const double mid = lo + 0.5 * (hi - lo);
    if (auto v = sp.Feasible(mid)) {
      lo = mid;
      witness = std::move(v);
    } else {
      hi = mid;
    }
  }
  out.v = *witness;
  out.value = sp.Evaluate(out.v);
  return out;
}

std::vector<double> WeightsFromV(const GroupSpec& g, const Subproblem& sp, const std::vector<Rational>& v) {
  std::vector<double> w(g.s_index().size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < sp.slots.size(); ++k) {
    const double logq = std::log2(static_cast<double>(g.s_index()[sp.slots[k]].p));
    w[sp.slots[k]] = static_cast<double>(v[k]) / logq;
    total += w[sp.slots[k]];
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

std::vector<ThetaTerm> TermsAt(const GroupSpec& g, const TermTable& terms, Sense sense,
                               std::span<const double> w) {
  const auto support = SupportOf(g, w);
  std::vector<ThetaTerm> out;
  for (const auto& theta : EnumerateTheta(g, support)) {
    if (IsExcluded(g, sense, theta)) continue;
    const auto a = OmegaCoefficients(g, theta);
    double num = 0.0, den = 0.0;
    bool num_zero = true, comp_zero = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) continue;
      const double logq = std::log2(static_cast<double>(g.s_index()[i].p));
      num += a[i] * w[i] * logq;
      den += g.s_index()[i].e * w[i] * logq;
      num_zero = num_zero && a[i] == 0;
      comp_zero = comp_zero && a[i] == g.s_index()[i].e;
    }
    ThetaTerm term;
    term.theta = theta;
    term.omega = num_zero ? 0.0 : (comp_zero ? 1.0 : num / den);
    term.info = std::max(TermInfo(terms, theta), 0.0);
    if (sense == Sense::kSource) {
      term.ratio = TermRatio(sense, term.info, num, den, num_zero);
    } else {
      term.ratio = TermRatio(sense, term.info, den - num, den, comp_zero);
    }
    out.push_back(std::move(term));
  }
  return out;
}

double EvaluateObjective(const GroupSpec& g, const TermTable& terms, Sense sense, std::span<const double> w) {
  double best = sense == Sense::kSource ? 0.0 : kInf;
  for (const auto& term : TermsAt(g, terms, sense, w)) {
    best = sense == Sense::kSource ? std::max(best, term.ratio) : std::min(best, term.ratio);
  }
  return best;
}

RateResult SolveMinimax(const GroupSpec& g, const TermTable& terms, Sense sense, const SolverOptions& options) {
  if (!(options.tolerance > 0.0)) throw InvalidInput("solver tolerance must be positive");
  RateResult best;
  bool have = false;
  std::vector<double> best_w;
  for (auto support : AdmissibleSupports(g)) {
    const auto sp = BuildSubproblem(g, terms, sense, support);
    const auto sol = SolveSupport(sp, options);
    const bool better = !have || (sense == Sense::kSource ? sol.value < best.value : sol.value > best.value);
    if (better) {
      have = true;
      best.value = sol.value;
      best.support = support;
      best.optimal_w = WeightsFromV(g, sp, sol.v);
      best.diagnostic = sol.diagnostic;
    }
    best.iterations += sol.iterations;
  }
  best.terms = TermsAt(g, terms, sense, best.optimal_w);
  if (std::isfinite(best.value)) {
    const double slack = 1e-9 * std::max(1.0, std::abs(best.value));
    for (const auto& term : best.terms) {
      if (std::abs(term.ratio - best.value) <= slack) best.critical_thetas.push_back(term.theta);
    }
  } else {
    for (const auto& term : best.terms) {
      if (std::isinf(term.ratio)) best.critical_thetas.push_back(term.theta);
    }
  }
  return best;
}

RateResult Isc(const SourceJoint& j, const SolverOptions& options) {
  return SolveMinimax(j.group(), SourceTerms(j), Sense::kSource, options);
}

RateResult Icc(const ChannelSpec& c, const SolverOptions& options) {
  return SolveMinimax(c.group(), ChannelTerms(c), Sense::kChannel, options);
}

namespace {

void RequireSingleRing(const GroupSpec& g) {
  if (!g.is_single_ring()) throw InvalidInput("closed form needs G = Z_{p^r}, got " + g.ToString());
}

double ZprSource(const GroupSpec& g, const TermTable& terms) {
  const auto r = g.rings()[0].r;
  double best = 0.0;
  for (std::uint32_t t = 1; t <= r; ++t) {
    best = std::max(best, static_cast<double>(r) / t * std::max(TermInfo(terms, {t}), 0.0));
  }
  return best;
}

double ZprChannel(const GroupSpec& g, const TermTable& terms) {
  const auto r = g.rings()[0].r;
  double best = kInf;
  for (std::uint32_t t = 0; t < r; ++t) {
    best = std::min(best, static_cast<double>(r) / (r - t) * std::max(TermInfo(terms, {t}), 0.0));
  }
  return best;
}

}  // namespace

double IscZprClosedForm(const SourceJoint& j) {
  RequireSingleRing(j.group());
  TermTable terms;
  for (std::uint32_t t = 1; t <= j.group().rings()[0].r; ++t) terms[{t}] = CosetMiSource(j, {t});
  return ZprSource(j.group(), terms);
}

double IccZprClosedForm(const ChannelSpec& c) {
  RequireSingleRing(c.group());
  TermTable terms;
  for (std::uint32_t t = 0; t < c.group().rings()[0].r; ++t) terms[{t}] = CosetMiChannel(c, {t});
  return ZprChannel(c.group(), terms);
}

std::optional<ClosedForm> ClosedFormValue(const GroupSpec& g, const TermTable& terms, Sense sense) {
  if (g.is_field()) {
    const auto theta = sense == Sense::kSource ? FullTheta(g) : ZeroTheta(g);
    return ClosedForm{"field", std::max(TermInfo(terms, theta), 0.0)};
  }
  if (g.is_single_ring()) {
    return ClosedForm{"Z_p^r", sense == Sense::kSource ? ZprSource(g, terms) : ZprChannel(g, terms)};
  }
  const std::vector<PrimePower> z2z4{{2, 1}, {2, 2}};
  if (g.num_rings() == 2 && g.q_index() == z2z4) {
    const double fine = std::max(TermInfo(terms, {1, 1}), 0.0);
    const double coarse = std::max(TermInfo(terms, {0, 1}), 0.0);
    if (sense == Sense::kSource) {
      return ClosedForm{"Z_2+Z_4", std::max(fine + coarse, std::max(TermInfo(terms, {1, 2}), 0.0))};
    }
    return ClosedForm{"Z_2+Z_4", std::min(fine + coarse, std::max(TermInfo(terms, {0, 0}), 0.0))};
  }
  return std::nullopt;
}

GridResult GridSearch(const GroupSpec& g, const TermTable& terms, Sense sense, unsigned steps) {
  if (steps == 0) throw InvalidInput("grid needs at least one step");
  const std::size_t n = g.s_index().size();
  GridResult out;
  out.value = sense == Sense::kSource ? kInf : -kInf;
  std::vector<unsigned> counts(n, 0);
  // Compositions of `steps` into n nonnegative parts.
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == n) {
      counts[i] = left;
      std::vector<double> w(n);
      for (std::size_t k = 0; k < n; ++k) w[k] = static_cast<double>(counts[k]) / steps;
      ++out.points;
      if (!CoversAllPrimes(g, SupportOf(g, w))) return;
      const double v = EvaluateObjective(g, terms, sense, w);
      const bool better = sense == Sense::kSource ? v < out.value : v > out.value;
      if (better || out.w.empty()) {
        out.value = v;
        out.w = w;
      }
      return;
    }
    for (unsigned c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, steps);
  return out;
}

}  // namespace abelrate
