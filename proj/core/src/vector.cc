// Copyright 2026 The MCM Toolkit Authors.
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

#include "mcm/vector.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcm/error.h"

namespace mcm {
namespace {

void check_same_dim(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dim() != v.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(u.dim()) + " vs " + std::to_string(v.dim()));
  }
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "embedding vector needs at least one component");
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (!std::isfinite(components_[i])) {
      throw Error(ErrorCode::kNonFinite, "component " + std::to_string(i) + " is not finite");
    }
  }
}

EmbeddingVector::EmbeddingVector(std::initializer_list<double> components)
    : EmbeddingVector(std::vector<double>(components)) {}

double dot(const EmbeddingVector& u, const EmbeddingVector& v) {
  check_same_dim(u, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) sum += u[i] * v[i];
  return sum;
}

double norm(const EmbeddingVector& v) {
  double sum = 0.0;
  for (double x : v.components()) sum += x * x;
  return std::sqrt(sum);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  check_same_dim(u, v);
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu < kZeroNormThreshold || nv < kZeroNormThreshold) {
    throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  }
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

EmbeddingVector mean_embedding(std::span<const EmbeddingVector> vs) {
  if (vs.empty()) throw Error(ErrorCode::kEmptyInput, "mean of no vectors");
  const std::size_t dim = vs.front().dim();
  require_dim(vs, dim);
  std::vector<double> sum(dim, 0.0);
  for (const auto& v : vs) {
    for (std::size_t i = 0; i < dim; ++i) sum[i] += v[i];
  }
  const double n = static_cast<double>(vs.size());
  for (double& x : sum) x /= n;
  return EmbeddingVector(std::move(sum));
}

EmbeddingVector normalize(const EmbeddingVector& v) {
  const double n = norm(v);
  if (n < kZeroNormThreshold) throw Error(ErrorCode::kZeroVector, "cannot normalize");
  std::vector<double> out(v.values());
  for (double& x : out) x /= n;
  return EmbeddingVector(std::move(out));
}

EmbeddingVector add(const EmbeddingVector& u, const EmbeddingVector& v) {
  check_same_dim(u, v);
  std::vector<double> out(u.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  return EmbeddingVector(std::move(out));
}

EmbeddingVector subtract(const EmbeddingVector& u, const EmbeddingVector& v) {
  check_same_dim(u, v);
  std::vector<double> out(u.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= v[i];
  return EmbeddingVector(std::move(out));
}

EmbeddingVector scale(const EmbeddingVector& v, double factor) {
  std::vector<double> out(v.values());
  for (double& x : out) x *= factor;
  return EmbeddingVector(std::move(out));
}

void require_dim(std::span<const EmbeddingVector> vs, std::size_t dim) {
  for (const auto& v : vs) {
    if (v.dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expected dim " + std::to_string(dim) + ", got " + std::to_string(v.dim()));
    }
  }
}

}  // namespace mcm
