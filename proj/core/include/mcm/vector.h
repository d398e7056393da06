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

#ifndef MCM_VECTOR_H_
#define MCM_VECTOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mcm {

// Norms below this are treated as the zero vector.
inline constexpr double kZeroNormThreshold = 1e-12;

// A dense embedding of a text item. Always at least one component, all finite.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> components);
  EmbeddingVector(std::initializer_list<double> components);

  std::size_t dim() const noexcept { return components_.size(); }
  bool empty() const noexcept { return components_.empty(); }
  double operator[](std::size_t i) const { return components_[i]; }
  std::span<const double> components() const noexcept { return components_; }
  const std::vector<double>& values() const noexcept { return components_; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> components_;
};

double dot(const EmbeddingVector& u, const EmbeddingVector& v);
double norm(const EmbeddingVector& v);

// Cosine similarity clamped to [-1, 1].
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Componentwise mean, summed in input order.
EmbeddingVector mean_embedding(std::span<const EmbeddingVector> vs);

EmbeddingVector normalize(const EmbeddingVector& v);

EmbeddingVector add(const EmbeddingVector& u, const EmbeddingVector& v);
EmbeddingVector subtract(const EmbeddingVector& u, const EmbeddingVector& v);
EmbeddingVector scale(const EmbeddingVector& v, double factor);

// Throws DimensionMismatch unless every vector has dimension `dim`.
void require_dim(std::span<const EmbeddingVector> vs, std::size_t dim);

}  // namespace mcm

#endif  // MCM_VECTOR_H_
