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

#include "core/info.hpp"

#include <cmath>
#include <string>

namespace abelrate {

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw InvalidInput("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

namespace {

void CheckEntries(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("probabilities must be finite and >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw InvalidInput("probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

double PlogP(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

void ValidateDistribution(std::span<const double> p) {
  if (p.empty()) throw InvalidInput("empty distribution");
  CheckEntries(p);
}

void ValidateJoint(const Matrix& joint) {
  if (joint.rows() == 0 || joint.cols() == 0) throw InvalidInput("empty joint distribution");
  CheckEntries(joint.data());
}

double Entropy(std::span<const double> p) {
  ValidateDistribution(p);
  double h = 0.0;
  for (double v : p) h += PlogP(v);
  return h;
}

double MutualInformation(const Matrix& joint) {
  ValidateJoint(joint);
  std::vector<double> row(joint.rows(), 0.0), col(joint.cols(), 0.0);
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      row[i] += joint(i, j);
      col[j] += joint(i, j);
    }
  }
  double mi = 0.0;
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      const double p = joint(i, j);
      if (p > 0.0) mi += p * std::log2(p / (row[i] * col[j]));
    }
  }
  return std::max(mi, 0.0);
}

ChannelSpec::ChannelSpec(std::shared_ptr<const GroupSpec> group, Matrix transition)
    : group_(std::move(group)), w_(std::move(transition)) {
  group_->CheckEnumerable();
  if (w_.rows() != group_->order()) {
    throw InvalidInput("channel has " + std::to_string(w_.rows()) + " rows, group order is " +
                       std::to_string(group_->order()));
  }
  if (w_.cols() == 0) throw InvalidInput("channel output alphabet is empty");
  for (std::size_t x = 0; x < w_.rows(); ++x) {
    try {
      CheckEntries(w_.row(x));
    } catch (const InvalidInput& e) {
      throw InvalidInput("channel row " + std::to_string(x) + ": " + e.what());
    }
  }
}

Matrix ChannelSpec::UniformJoint() const {
  Matrix joint(w_.rows(), w_.cols());
  const double px = 1.0 / static_cast<double>(w_.rows());
  for (std::size_t x = 0; x < w_.rows(); ++x) {
    for (std::size_t y = 0; y < w_.cols(); ++y) joint(x, y) = px * w_(x, y);
  }
  return joint;
}

SourceJoint::SourceJoint(std::shared_ptr<const GroupSpec> group, Matrix joint,
                         std::optional<Matrix> distortion, std::optional<double> max_distortion)
    : group_(std::move(group)), p_(std::move(joint)), d_(std::move(distortion)), max_d_(max_distortion) {
  group_->CheckEnumerable();
  if (p_.cols() != group_->order()) {
    throw InvalidInput("joint has " + std::to_string(p_.cols()) + " columns, group order is " +
                       std::to_string(group_->order()));
  }
  ValidateJoint(p_);
  const double uniform = 1.0 / static_cast<double>(group_->order());
  for (std::size_t u = 0; u < p_.cols(); ++u) {
    double col = 0.0;
    for (std::size_t x = 0; x < p_.rows(); ++x) col += p_(x, u);
    if (std::abs(col - uniform) > kProbabilityTolerance) {
      throw InvalidInput("U-marginal is not uniform at column " + std::to_string(u));
    }
  }
  if (d_) {
    if (d_->rows() != p_.rows() || d_->cols() != p_.cols()) {
      throw InvalidInput("distortion matrix shape does not match the joint");
    }
    for (double v : d_->data()) {
      if (!std::isfinite(v) || v < 0.0) throw InvalidInput("distortion entries must be >= 0");
    }
  }
  if (max_d_ && !d_) throw InvalidInput("distortion level given without a distortion matrix");
  if (max_d_ && ExpectedDistortion() > *max_d_ + kProbabilityTolerance) {
    throw InvalidInput("expected distortion " + std::to_string(ExpectedDistortion()) +
                       " exceeds D = " + std::to_string(*max_d_));
  }
}

std::vector<double> SourceJoint::SourceMarginal() const {
  std::vector<double> px(p_.rows(), 0.0);
  for (std::size_t x = 0; x < p_.rows(); ++x) {
    for (std::size_t u = 0; u < p_.cols(); ++u) px[x] += p_(x, u);
  }
  return px;
}

double SourceJoint::ExpectedDistortion() const {
  if (!d_) throw InvalidInput("source has no distortion matrix");
  double e = 0.0;
  for (std::size_t i = 0; i < p_.data().size(); ++i) e += p_.data()[i] * d_->data()[i];
  return e;
}

double CosetMiSource(const SourceJoint& j, const ThetaVector& theta) {
  const Subgroup h(j.group_ptr(), theta);
  const auto& g = j.group();
  Matrix merged(j.source_size(), h.index());
  for (std::uint64_t u = 0; u < g.order(); ++u) {
    const auto label = h.CosetId(g.ElementAt(u));
    for (std::size_t x = 0; x < j.source_size(); ++x) merged(x, label) += j.joint()(x, u);
  }
  return MutualInformation(merged);
}

std::vector<double> PerCosetMi(const ChannelSpec& c, const ThetaVector& theta) {
  const Subgroup h(c.group_ptr(), theta);
  const auto& g = c.group();
  std::vector<std::vector<std::uint64_t>> members(h.index());
  for (std::uint64_t x = 0; x < g.order(); ++x) members[h.CosetId(g.ElementAt(x))].push_back(x);
  std::vector<double> out;
  out.reserve(members.size());
  for (const auto& coset : members) {
    Matrix joint(coset.size(), c.output_size());
    const double px = 1.0 / static_cast<double>(coset.size());
    for (std::size_t i = 0; i < coset.size(); ++i) {
      for (std::size_t y = 0; y < c.output_size(); ++y) joint(i, y) = px * c.transition()(coset[i], y);
    }
    out.push_back(MutualInformation(joint));
  }
  return out;
}

double CosetMiChannel(const ChannelSpec& c, const ThetaVector& theta) {
  const auto per = PerCosetMi(c, theta);
  double total = 0.0;
  for (double v : per) total += v;
  return total / static_cast<double>(per.size());
}

double CosetMiChannelChain(const ChannelSpec& c, const ThetaVector& theta) {
  const Subgroup h(c.group_ptr(), theta);
  const auto& g = c.group();
  const Matrix joint = c.UniformJoint();
  Matrix merged(h.index(), c.output_size());
  for (std::uint64_t x = 0; x < g.order(); ++x) {
    const auto label = h.CosetId(g.ElementAt(x));
    for (std::size_t y = 0; y < c.output_size(); ++y) merged(label, y) += joint(x, y);
  }
  return std::max(MutualInformation(joint) - MutualInformation(merged), 0.0);
}

}  // namespace abelrate
