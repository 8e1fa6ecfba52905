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

#include "core/feasibility.hpp"

#include <cmath>
#include <stdexcept>

namespace abelrate {

Rational ExactRational(double value) {
  if (!std::isfinite(value)) throw std::domain_error("cannot convert a non-finite value to a rational");
  int exp = 0;
  const double mant = std::frexp(value, &exp);
  // mant * 2^53 is an integer for any double.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational out(scaled);
  exp -= 53;
  boost::multiprecision::cpp_int pow2 = 1;
  pow2 <<= std::abs(exp);
  return exp >= 0 ? out * Rational(pow2) : out / Rational(pow2);
}

namespace {

bool Satisfies(const std::vector<LinearRow>& rows, const std::vector<Rational>& v) {
  for (const auto& x : v) {
    if (x < 0) return false;
  }
  for (const auto& row : rows) {
    Rational dot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += row[i] * v[i];
    if (dot < 0) return false;
  }
  return true;
}

// Solves the square system m * x = rhs by Gauss-Jordan; nullopt if singular.
std::optional<std::vector<Rational>> Solve(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
  return rhs;
}

}  // namespace

std::optional<std::vector<Rational>> FindSimplexPoint(const std::vector<LinearRow>& rows, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("simplex dimension must be positive");
  std::vector<LinearRow> active;
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::invalid_argument("constraint row has wrong dimension");
    bool all_nonneg = true, all_neg = true;
    for (const auto& c : row) {
      all_nonneg = all_nonneg && c >= 0;
      all_neg = all_neg && c < 0;
    }
    if (all_neg) return std::nullopt;
    if (!all_nonneg) active.push_back(row);
  }

  // Simplex corners first; they are the vertices when no row cuts.
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Rational> v(dim, 0);
    v[i] = 1;
    if (Satisfies(active, v)) return v;
  }
  if (dim == 1) return std::nullopt;

  // Candidate hyperplanes: v_i = 0 for each i, then each active row = 0.
  std::vector<LinearRow> planes;
  for (std::size_t i = 0; i < dim; ++i) {
    LinearRow e(dim, 0);
    e[i] = 1;
    planes.push_back(std::move(e));
  }
  for (const auto& row : active) planes.push_back(row);

  const std::size_t pick = dim - 1;
  std::vector<std::size_t> idx(pick);
  for (std::size_t i = 0; i < pick; ++i) idx[i] = i;
  while (true) {
    std::vector<std::vector<Rational>> m;
    std::vector<Rational> rhs;
    for (auto k : idx) {
      m.push_back(planes[k]);
      rhs.emplace_back(0);
    }
    m.emplace_back(dim, Rational(1));
    rhs.emplace_back(1);
    if (auto v = Solve(std::move(m), std::move(rhs)); v && Satisfies(active, *v)) return v;

    // Next combination.
    std::size_t i = pick;
    while (i > 0 && idx[i - 1] == planes.size() - pick + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < pick; ++j) idx[j] = idx[j - 1] + 1;
  }
  return std::nullopt;
}

}  // namespace abelrate
