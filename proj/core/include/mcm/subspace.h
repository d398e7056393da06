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

#ifndef MCM_SUBSPACE_H_
#define MCM_SUBSPACE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcm/choice_machine.h"
#include "mcm/provider.h"
#include "mcm/vector.h"

namespace mcm {

// Centered rows whose norm is below this count as zero for DegenerateData.
inline constexpr double kDegenerateRowNorm = 1e-10;

// Default orientation anchor: these actions project onto the positive side.
std::vector<ActionQuery> default_anchor();

// Principal components of a set of row vectors via a one-sided Jacobi SVD of
// the centered data matrix. Components are unit length, ordered by decreasing
// singular value; at most min(n, d) are reported.
struct PrincipalComponents {
  EmbeddingVector mean;
  std::vector<EmbeddingVector> directions;  // only those with nonzero singular value
  std::vector<double> singular_values;      // min(n, d) values, nonincreasing
  std::vector<double> variance_ratios;      // singular_values^2 / sum, sums to 1
};

PrincipalComponents principal_components(std::span<const EmbeddingVector> rows);

struct MoralSubspace {
  EmbeddingVector mean;
  EmbeddingVector direction;                // unit; the moral direction
  std::optional<EmbeddingVector> secondary;  // unit, orthogonal to direction; absent if dim == 1
  std::vector<double> variance_ratios;
  std::vector<std::string> orientation_anchor;
  std::size_t n_samples = 0;

  std::size_t dim() const noexcept { return mean.dim(); }

  // variance_ratios[0] / variance_ratios[1]; infinity when the second is zero.
  double dominance_ratio() const;
};

// Mean embedding of the rendered questions (answers are not used).
EmbeddingVector action_embedding(const ActionQuery& action, const Template& tmpl,
                                 const EmbeddingSource& source);
std::vector<EmbeddingVector> action_embeddings(std::span<const ActionQuery> actions,
                                               const Template& tmpl,
                                               const EmbeddingSource& source);

// PCA over precomputed rows. The direction is re-signed so that the mean
// centered projection of `anchor_rows` is >= 0. With no anchor rows the sign
// makes the largest-magnitude component of the direction positive.
MoralSubspace fit_subspace_rows(std::span<const EmbeddingVector> rows,
                                std::span<const EmbeddingVector> anchor_rows,
                                std::vector<std::string> anchor_labels);

// Anchors missing from `actions` are still projected; each one adds a line to
// `warnings` when it is provided.
MoralSubspace fit_subspace(std::span<const ActionQuery> actions, const Template& tmpl,
                           const EmbeddingSource& source,
                           std::span<const ActionQuery> anchor_donts,
                           std::vector<std::string>* warnings = nullptr);

// PCA over embed(a) - embed(b). The first elements define the positive side:
// the mean difference projects onto the direction with a nonnegative sign.
MoralSubspace fit_difference_subspace(std::span<const std::pair<std::string, std::string>> pairs,
                                      const EmbeddingSource& source);

// dot(embedding - mean, direction).
double project(const EmbeddingVector& embedding, const MoralSubspace& sub);

double moral_score(const ActionQuery& action, const MoralSubspace& sub, const Template& tmpl,
                   const EmbeddingSource& source);

struct ScoredAction {
  ActionQuery action;
  double m = 0.0;
};

std::vector<ScoredAction> moral_scores(std::span<const ActionQuery> actions,
                                       const MoralSubspace& sub, const Template& tmpl,
                                       const EmbeddingSource& source);

struct Projection2d {
  ActionQuery action;
  double x = 0.0;  // along the moral direction
  double y = 0.0;  // along the second component
};

std::pair<double, double> project_2d(const EmbeddingVector& embedding, const MoralSubspace& sub);

std::vector<Projection2d> project_2d(std::span<const ActionQuery> actions,
                                     const MoralSubspace& sub, const Template& tmpl,
                                     const EmbeddingSource& source);

// {"dim":d,"mean":[...],"direction":[...],"variance_ratios":[...],"anchor":[...],
//  "n_samples":n,"secondary":[...]}; "secondary" is optional on input.
std::string subspace_to_json(const MoralSubspace& sub);
MoralSubspace subspace_from_json(const std::string& json_text);
MoralSubspace load_subspace(const std::filesystem::path& path);

}  // namespace mcm

#endif  // MCM_SUBSPACE_H_
