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

#include "mcm/subspace.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/parallel.h"

namespace mcm {
namespace {

using nlohmann::json;

constexpr int kMaxSweeps = 100;
constexpr double kOrthogonalityTol = 1e-15;

using Column = std::vector<double>;

double column_dot(const Column& a, const Column& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// One-sided Jacobi: rotates pairs of columns until all are mutually orthogonal.
// The columns then hold U * Sigma of the input matrix.
void orthogonalize_columns(std::vector<Column>& cols) {
  double frob2 = 0.0;
  for (const auto& c : cols) frob2 += column_dot(c, c);
  const double tiny = frob2 * 1e-30;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols.size(); ++p) {
      for (std::size_t q = p + 1; q < cols.size(); ++q) {
        const double alpha = column_dot(cols[p], cols[p]);
        const double beta = column_dot(cols[q], cols[q]);
        if (alpha <= tiny || beta <= tiny) continue;
        const double gamma = column_dot(cols[p], cols[q]);
        if (std::abs(gamma) <= kOrthogonalityTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < cols[p].size(); ++i) {
          const double ap = cols[p][i];
          const double aq = cols[q][i];
          cols[p][i] = c * ap - s * aq;
          cols[q][i] = s * ap + c * aq;
        }
      }
    }
    if (!rotated) return;
  }
}

// Largest-magnitude component made positive (first index wins ties).
EmbeddingVector canonical_sign(const EmbeddingVector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.dim(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  return v[best] < 0 ? scale(v, -1.0) : v;
}

// Unit vector orthogonal to the unit vector `m`, from the basis vector along
// m's smallest-magnitude component.
EmbeddingVector orthogonal_unit(const EmbeddingVector& m) {
  std::size_t pick = 0;
  for (std::size_t i = 1; i < m.dim(); ++i) {
    if (std::abs(m[i]) < std::abs(m[pick])) pick = i;
  }
  std::vector<double> e(m.dim(), 0.0);
  e[pick] = 1.0;
  const double proj = m[pick];
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= proj * m[i];
  return canonical_sign(normalize(EmbeddingVector(std::move(e))));
}

double mean_projection(std::span<const EmbeddingVector> rows, const EmbeddingVector& mean,
                       const EmbeddingVector& direction) {
  double sum = 0.0;
  for (const auto& r : rows) sum += dot(subtract(r, mean), direction);
  return sum / static_cast<double>(rows.size());
}

MoralSubspace subspace_from_components(const PrincipalComponents& pcs, std::size_t n) {
  MoralSubspace sub{pcs.mean, canonical_sign(pcs.directions.front()), std::nullopt,
                    pcs.variance_ratios, {}, n};
  if (sub.dim() >= 2) {
    sub.secondary = pcs.directions.size() >= 2 ? canonical_sign(pcs.directions[1])
                                               : orthogonal_unit(sub.direction);
  }
  return sub;
}

std::vector<double> doubles(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(ErrorCode::kFormat, std::string("subspace JSON needs array \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (!x.is_number()) throw Error(ErrorCode::kFormat, std::string(key) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

std::vector<ActionQuery> default_anchor() {
  return {ActionQuery::from_phrase("kill"), ActionQuery::from_phrase("murder"),
          ActionQuery::from_phrase("slaughter")};
}

PrincipalComponents principal_components(std::span<const EmbeddingVector> rows) {
  if (rows.size() < 2) throw Error(ErrorCode::kInsufficientData, "PCA needs at least 2 rows");
  const auto mean = mean_embedding(rows);
  const std::size_t n = rows.size();
  const std::size_t d = mean.dim();

  std::vector<Column> cols(n);
  bool any_signal = false;
  for (std::size_t i = 0; i < n; ++i) {
    cols[i].resize(d);
    for (std::size_t j = 0; j < d; ++j) cols[i][j] = rows[i][j] - mean[j];
    if (std::sqrt(column_dot(cols[i], cols[i])) >= kDegenerateRowNorm) any_signal = true;
  }
  if (!any_signal) throw Error(ErrorCode::kDegenerateData, "all centered rows are zero");

  orthogonalize_columns(cols);

  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = std::sqrt(column_dot(cols[i], cols[i]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  // Singular values at round-off level relative to the largest are rank noise.
  const double cutoff = sigma[order[0]] * 1e-12;
  for (double& s : sigma) {
    if (s <= cutoff) s = 0.0;
  }
  const std::size_t keep = std::min(n, d);
  PrincipalComponents out{mean, {}, {}, {}};
  double total = 0.0;
  for (double s : sigma) total += s * s;
  for (std::size_t k = 0; k < keep; ++k) {
    const std::size_t i = order[k];
    out.singular_values.push_back(sigma[i]);
    out.variance_ratios.push_back(sigma[i] * sigma[i] / total);
    if (sigma[i] > cutoff) {
      std::vector<double> u(cols[i]);
      for (double& x : u) x /= sigma[i];
      out.directions.emplace_back(std::move(u));
    }
  }
  return out;
}

double MoralSubspace::dominance_ratio() const {
  if (variance_ratios.size() < 2 || variance_ratios[1] == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return variance_ratios[0] / variance_ratios[1];
}

EmbeddingVector action_embedding(const ActionQuery& action, const Template& tmpl,
                                 const EmbeddingSource& source) {
  return action_embeddings(std::span<const ActionQuery>(&action, 1), tmpl, source).front();
}

std::vector<EmbeddingVector> action_embeddings(std::span<const ActionQuery> actions,
                                               const Template& tmpl,
                                               const EmbeddingSource& source) {
  if (actions.empty()) return {};
  std::vector<TextItem> questions;
  questions.reserve(actions.size() * tmpl.size());
  for (const auto& action : actions) {
    for (auto& r : render_prompts(tmpl, action)) {
      questions.push_back({std::move(r.question), TextKind::kSentence});
    }
  }
  const auto vectors = embed_batch(source, questions);
  std::vector<EmbeddingVector> out;
  out.reserve(actions.size());
  for (std::size_t a = 0; a < actions.size(); ++a) {
    out.push_back(mean_embedding(std::span<const EmbeddingVector>(vectors).subspan(
        a * tmpl.size(), tmpl.size())));
  }
  return out;
}

MoralSubspace fit_subspace_rows(std::span<const EmbeddingVector> rows,
                                std::span<const EmbeddingVector> anchor_rows,
                                std::vector<std::string> anchor_labels) {
  const auto pcs = principal_components(rows);
  auto sub = subspace_from_components(pcs, rows.size());
  if (!anchor_rows.empty()) {
    require_dim(anchor_rows, sub.dim());
    if (mean_projection(anchor_rows, sub.mean, sub.direction) < 0.0) {
      sub.direction = scale(sub.direction, -1.0);
    }
  }
  sub.orientation_anchor = std::move(anchor_labels);
  return sub;
}

MoralSubspace fit_subspace(std::span<const ActionQuery> actions, const Template& tmpl,
                           const EmbeddingSource& source,
                           std::span<const ActionQuery> anchor_donts,
                           std::vector<std::string>* warnings) {
  if (actions.size() < 2) throw Error(ErrorCode::kInsufficientData, "need at least 2 actions");
  const auto rows = action_embeddings(actions, tmpl, source);

  std::unordered_set<std::string> fitted;
  for (const auto& a : actions) fitted.insert(a.phrase());
  std::vector<std::string> labels;
  for (const auto& a : anchor_donts) {
    labels.push_back(a.phrase());
    if (warnings && !fitted.count(a.phrase())) {
      warnings->push_back("anchor action \"" + a.phrase() + "\" is not among the fitted actions");
    }
  }
  const auto anchor_rows = action_embeddings(anchor_donts, tmpl, source);
  return fit_subspace_rows(rows, anchor_rows, std::move(labels));
}

MoralSubspace fit_difference_subspace(std::span<const std::pair<std::string, std::string>> pairs,
                                      const EmbeddingSource& source) {
  if (pairs.size() < 2) throw Error(ErrorCode::kInsufficientData, "need at least 2 pairs");
  std::vector<TextItem> texts;
  texts.reserve(2 * pairs.size());
  std::vector<std::string> labels;
  for (const auto& [a, b] : pairs) {
    texts.push_back({a, TextKind::kSentence});
    texts.push_back({b, TextKind::kSentence});
    labels.push_back(a);
  }
  const auto vectors = embed_batch(source, texts);
  std::vector<EmbeddingVector> diffs;
  diffs.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    diffs.push_back(subtract(vectors[2 * i], vectors[2 * i + 1]));
  }

  const auto pcs = principal_components(diffs);
  auto sub = subspace_from_components(pcs, diffs.size());
  const auto mean_diff = mean_embedding(diffs);
  if (dot(mean_diff, sub.direction) < -kZeroNormThreshold * norm(mean_diff)) {
    sub.direction = scale(sub.direction, -1.0);
  }
  sub.orientation_anchor = std::move(labels);
  return sub;
}

double project(const EmbeddingVector& embedding, const MoralSubspace& sub) {
  return dot(subtract(embedding, sub.mean), sub.direction);
}

double moral_score(const ActionQuery& action, const MoralSubspace& sub, const Template& tmpl,
                   const EmbeddingSource& source) {
  return project(action_embedding(action, tmpl, source), sub);
}

std::vector<ScoredAction> moral_scores(std::span<const ActionQuery> actions,
                                       const MoralSubspace& sub, const Template& tmpl,
                                       const EmbeddingSource& source) {
  const auto embeddings = action_embeddings(actions, tmpl, source);
  std::vector<ScoredAction> out(actions.size());
  parallel_for(actions.size(), 0, [&](std::size_t i) {
    out[i] = {actions[i], project(embeddings[i], sub)};
  });
  return out;
}

std::pair<double, double> project_2d(const EmbeddingVector& embedding, const MoralSubspace& sub) {
  const auto centered = subtract(embedding, sub.mean);
  const double x = dot(centered, sub.direction);
  const double y = sub.secondary ? dot(centered, *sub.secondary) : 0.0;
  return {x, y};
}

std::vector<Projection2d> project_2d(std::span<const ActionQuery> actions,
                                     const MoralSubspace& sub, const Template& tmpl,
                                     const EmbeddingSource& source) {
  const auto embeddings = action_embeddings(actions, tmpl, source);
  std::vector<Projection2d> out(actions.size());
  parallel_for(actions.size(), 0, [&](std::size_t i) {
    const auto [x, y] = project_2d(embeddings[i], sub);
    out[i] = {actions[i], x, y};
  });
  return out;
}

std::string subspace_to_json(const MoralSubspace& sub) {
  nlohmann::ordered_json j;
  j["dim"] = sub.dim();
  j["mean"] = sub.mean.values();
  j["direction"] = sub.direction.values();
  j["variance_ratios"] = sub.variance_ratios;
  j["anchor"] = sub.orientation_anchor;
  j["n_samples"] = sub.n_samples;
  if (sub.secondary) j["secondary"] = sub.secondary->values();
  return j.dump(2) + "\n";
}

MoralSubspace subspace_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("subspace JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned()) {
    throw Error(ErrorCode::kFormat, "subspace JSON needs an unsigned \"dim\"");
  }
  const auto dim = j["dim"].get<std::size_t>();
  MoralSubspace sub;
  sub.mean = EmbeddingVector(doubles(j, "mean"));
  sub.direction = EmbeddingVector(doubles(j, "direction"));
  if (sub.mean.dim() != dim || sub.direction.dim() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "subspace vectors disagree with \"dim\"");
  }
  if (std::abs(norm(sub.direction) - 1.0) > 1e-10) {
    throw Error(ErrorCode::kFormat, "subspace direction is not unit length");
  }
  if (j.contains("secondary")) {
    sub.secondary = EmbeddingVector(doubles(j, "secondary"));
    if (sub.secondary->dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "secondary direction disagrees with \"dim\"");
    }
  }
  sub.variance_ratios = doubles(j, "variance_ratios");
  if (!j.contains("anchor") || !j["anchor"].is_array()) {
    throw Error(ErrorCode::kFormat, "subspace JSON needs an \"anchor\" list");
  }
  for (const auto& a : j["anchor"]) {
    if (!a.is_string()) throw Error(ErrorCode::kFormat, "anchor entries must be strings");
    sub.orientation_anchor.push_back(a.get<std::string>());
  }
  if (!j.contains("n_samples") || !j["n_samples"].is_number_unsigned()) {
    throw Error(ErrorCode::kFormat, "subspace JSON needs an unsigned \"n_samples\"");
  }
  sub.n_samples = j["n_samples"].get<std::size_t>();
  return sub;
}

MoralSubspace load_subspace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return subspace_from_json(text);
}

}  // namespace mcm
