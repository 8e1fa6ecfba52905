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

// Group-code rate functionals.
//
// A weight vector w lives on S(G). Its support fixes the set Theta(w) of
// subgroup selectors, and every theta contributes a ratio of two linear forms
// in w through omega_theta. The source functional is
//
//   min_w max_{theta in Theta(w), theta != 0} I([U]_theta; X) / omega_theta
//
// and the channel functional is
//
//   max_w min_{theta in Theta(w), theta != r} I(X; Y | [X]_theta) / (1 - omega_theta).
//
// SolveMinimax handles both by enumerating supports and bisecting on the
// target rate; each bisection step is an exact linear feasibility problem over
// the simplex in the variables v_{q,s} = w_{q,s} log q.

#ifndef ABELRATE_CORE_RATES_HPP_
#define ABELRATE_CORE_RATES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/feasibility.hpp"
#include "core/group.hpp"
#include "core/info.hpp"

namespace abelrate {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bit i selects s_index()[i].
using SupportMask = std::uint32_t;

SupportMask FullSupport(const GroupSpec& g);
bool CoversAllPrimes(const GroupSpec& g, SupportMask support);
// Every nonempty support covering all primes, in increasing mask order.
std::vector<SupportMask> AdmissibleSupports(const GroupSpec& g);
SupportMask SupportOf(const GroupSpec& g, std::span<const double> w);
std::string SupportToString(const GroupSpec& g, SupportMask support);
// Parses "2:2,2:3" into a mask.
SupportMask ParseSupport(const GroupSpec& g, const std::string& text);

// theta_{p,r} = min over supported (p,s) of (r-s)^+ + thetahat_{p,s}, clamped
// to r. `thetahat` is indexed like s_index(); unsupported entries are ignored.
ThetaVector ThetaOfThetaHat(const GroupSpec& g, SupportMask support,
                            std::span<const std::uint32_t> thetahat);

// Theta(w) for a support, sorted and deduplicated.
std::vector<ThetaVector> EnumerateTheta(const GroupSpec& g, SupportMask support);

// Every theta with 0 <= theta_{p,r} <= r, lexicographic.
std::vector<ThetaVector> AllThetas(const GroupSpec& g);

// Numerator coefficients of omega_theta, indexed like s_index():
// max_{(p,r) in Q, p = q} (theta_{p,r} - (r - s)^+)^+.
std::vector<std::uint32_t> OmegaCoefficients(const GroupSpec& g, const ThetaVector& theta);

void ValidateWeights(const GroupSpec& g, std::span<const double> w);
double Omega(const GroupSpec& g, std::span<const double> w, const ThetaVector& theta);
// Exact omega for single-prime groups, where the log q factors cancel.
Rational OmegaExact(const GroupSpec& g, std::span<const Rational> w, const ThetaVector& theta);

enum class Sense { kSource, kChannel };

// Information value per theta: I([U]_theta; X) or I(X; Y | [X]_theta).
using TermTable = std::map<ThetaVector, double>;

TermTable SourceTerms(const SourceJoint& j);
TermTable ChannelTerms(const ChannelSpec& c);

struct ThetaTerm {
  ThetaVector theta;
  double omega = 0.0;
  double info = 0.0;
  double ratio = 0.0;  // may be +inf
};

struct RateResult {
  double value = 0.0;  // +inf when unbounded
  std::vector<double> optimal_w;  // indexed like s_index()
  SupportMask support = 0;
  std::vector<ThetaVector> critical_thetas;
  std::vector<ThetaTerm> terms;  // the inner constraints at optimal_w
  std::string diagnostic;
  int iterations = 0;
};

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 200;
};

// Objective at a fixed weight vector, evaluated straight from the
// definitions (support of w, Theta(w), omega, conventions for 0 denominators).
double EvaluateObjective(const GroupSpec& g, const TermTable& terms, Sense sense,
                         std::span<const double> w);
std::vector<ThetaTerm> TermsAt(const GroupSpec& g, const TermTable& terms, Sense sense,
                               std::span<const double> w);

RateResult SolveMinimax(const GroupSpec& g, const TermTable& terms, Sense sense,
                        const SolverOptions& options = {});

RateResult Isc(const SourceJoint& j, const SolverOptions& options = {});
RateResult Icc(const ChannelSpec& c, const SolverOptions& options = {});

double IscZprClosedForm(const SourceJoint& j);
double IccZprClosedForm(const ChannelSpec& c);

struct ClosedForm {
  std::string name;  // "field", "Z_p^r", "Z_2+Z_4"
  double value = 0.0;
};

// Closed-form value when the group is a field, a single Z_{p^r} ring, or
// Z_2 + Z_4.
std::optional<ClosedForm> ClosedFormValue(const GroupSpec& g, const TermTable& terms, Sense sense);

struct GridResult {
  double value = 0.0;
  std::vector<double> w;
  std::uint64_t points = 0;
};

// Exhaustive search over the weight simplex with step 1/steps.
GridResult GridSearch(const GroupSpec& g, const TermTable& terms, Sense sense, unsigned steps);

}  // namespace abelrate

#endif  // ABELRATE_CORE_RATES_HPP_
