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

// Discrete information measures in bits, including the coset-conditioned
// quantities I([U]_theta; X) and I(X; Y | [X]_theta).

#ifndef ABELRATE_CORE_INFO_HPP_
#define ABELRATE_CORE_INFO_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "core/group.hpp"

namespace abelrate {

inline constexpr double kProbabilityTolerance = 1e-9;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

void ValidateDistribution(std::span<const double> p);
void ValidateJoint(const Matrix& joint);

double Entropy(std::span<const double> p);
double MutualInformation(const Matrix& joint);

// Row-stochastic W[x][y] with rows in canonical element order of G.
class ChannelSpec {
 public:
  ChannelSpec(std::shared_ptr<const GroupSpec> group, Matrix transition);

  const GroupSpec& group() const { return *group_; }
  const std::shared_ptr<const GroupSpec>& group_ptr() const { return group_; }
  const Matrix& transition() const { return w_; }
  std::size_t output_size() const { return w_.cols(); }

  // Joint of (X, Y) with X uniform on G.
  Matrix UniformJoint() const;

 private:
  std::shared_ptr<const GroupSpec> group_;
  Matrix w_;
};

// Joint p[x][u] with U ranging over G (columns in canonical order) and a
// uniform U-marginal, plus optional distortion data.
class SourceJoint {
 public:
  SourceJoint(std::shared_ptr<const GroupSpec> group, Matrix joint,
              std::optional<Matrix> distortion = std::nullopt,
              std::optional<double> max_distortion = std::nullopt);

  const GroupSpec& group() const { return *group_; }
  const std::shared_ptr<const GroupSpec>& group_ptr() const { return group_; }
  const Matrix& joint() const { return p_; }
  std::size_t source_size() const { return p_.rows(); }
  const std::optional<Matrix>& distortion() const { return d_; }
  const std::optional<double>& max_distortion() const { return max_d_; }

  std::vector<double> SourceMarginal() const;
  double ExpectedDistortion() const;  // requires distortion()

 private:
  std::shared_ptr<const GroupSpec> group_;
  Matrix p_;
  std::optional<Matrix> d_;
  std::optional<double> max_d_;
};

// I([U]_theta; X).
double CosetMiSource(const SourceJoint& j, const ThetaVector& theta);
// I(X; Y | [X]_theta) with X uniform, as the average of per-coset MI.
double CosetMiChannel(const ChannelSpec& c, const ThetaVector& theta);
// Same quantity through I(X;Y) - I([X]_theta; Y).
double CosetMiChannelChain(const ChannelSpec& c, const ThetaVector& theta);
// I(X; Y | X uniform on coset `coset_id` of H_theta), one entry per coset.
std::vector<double> PerCosetMi(const ChannelSpec& c, const ThetaVector& theta);

}  // namespace abelrate

#endif  // ABELRATE_CORE_INFO_HPP_
