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

#ifndef ABELRATE_CORE_FEASIBILITY_HPP_
#define ABELRATE_CORE_FEASIBILITY_HPP_

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace abelrate {

using Rational = boost::multiprecision::cpp_rational;

// Converts a finite double to the rational it represents exactly.
Rational ExactRational(double value);

// Homogeneous constraint sum_i coef[i] * v[i] >= 0.
using LinearRow = std::vector<Rational>;

// Decides exactly whether {v >= 0, sum v = 1, row . v >= 0 for all rows} is
// nonempty, by enumerating the vertices of the polytope. Returns a vertex when
// it is.
std::optional<std::vector<Rational>> FindSimplexPoint(const std::vector<LinearRow>& rows,
                                                      std::size_t dim);

}  // namespace abelrate

#endif  // ABELRATE_CORE_FEASIBILITY_HPP_
