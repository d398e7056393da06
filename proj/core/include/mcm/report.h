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

#ifndef MCM_REPORT_H_
#define MCM_REPORT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcm/choice_machine.h"
#include "mcm/provider.h"
#include "mcm/stats.h"
#include "mcm/subspace.h"
#include "mcm/weat.h"

namespace mcm {

// ---------------------------------------------------------------------------
// Embedding source selection.
//
//   hash                 hash embedder with the default seed and dim
//   hash:<seed>:<dim>    hash embedder with explicit parameters
//   file:<path>          mcm-embeddings JSON Lines file
//   fixture:<path>       JSON object {"text": [floats], ...}
//   remote:[<url>]       HTTP contract; empty url falls back to $MCM_EMBED_URL

struct SourceSpec {
  enum class Kind { kHash, kFile, kFixture, kRemote };

  Kind kind = Kind::kHash;
  std::uint64_t seed = 42;
  std::size_t dim = 256;
  std::filesystem::path path;
  std::string url;
  std::chrono::milliseconds timeout{30000};
};

SourceSpec parse_source_spec(const std::string& spec, std::uint64_t default_seed = 42,
                             std::size_t default_dim = 256);

StoreSource load_fixture(const std::filesystem::path& path);

// The returned source is wrapped in a CachedSource.
std::shared_ptr<const EmbeddingSource> make_source(const SourceSpec& spec);

// Directory holding the shipped data files: $MCM_DATA_DIR if set, otherwise
// the location fixed at build/install time.
std::filesystem::path data_dir();

// ---------------------------------------------------------------------------
// CSV (RFC 4180 quoting, "\n" line ends, floats in shortest round-trip form).

using CsvRow = std::vector<std::string>;

std::string csv_line(const CsvRow& fields);
std::string to_csv(const CsvRow& header, const std::vector<CsvRow>& rows);
std::vector<CsvRow> parse_csv(const std::string& text);

// Columns: action, bias_0 .. bias_{T-1}, overall, classification.
std::string bias_results_csv(const std::vector<BiasResult>& results, double threshold);
std::string bias_results_json(const std::vector<BiasResult>& results, double threshold);

struct CorrelationRow {
  std::string word;
  double weat = 0.0;
  double bias = 0.0;
  Choice group = Choice::kDo;

  bool operator==(const CorrelationRow&) const = default;
};

// Columns: word, weat, bias, group.
std::string correlation_csv(const std::vector<CorrelationRow>& rows);
std::vector<CorrelationRow> parse_correlation_csv(const std::string& text);
std::string correlation_report_json(const CorrelationReport& report);
std::string ttest_report_json(const TTestReport& report);

// Columns: action, m. Rows as given.
std::string moral_scores_csv(const std::vector<ScoredAction>& scores);
std::vector<ScoredAction> parse_moral_scores_csv(const std::string& text);

// Ascending by m, ties by phrase.
void sort_by_score(std::vector<ScoredAction>& scores);

// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// SVG.

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;
  int group = 0;
};

struct ScatterOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> group_names;
  bool fit_line = false;
  bool label_points = false;
};

std::string scatter_svg(const std::vector<ScatterPoint>& points, const ScatterOptions& options);
std::string bar_svg(const std::vector<double>& values, const std::string& title);

// ---------------------------------------------------------------------------
// Studies.

struct RunConfig {
  std::string source = "hash";
  std::uint64_t seed = 42;
  std::size_t dim = 256;
  std::optional<std::filesystem::path> template_path;
  std::optional<std::filesystem::path> association_path;
  std::optional<std::filesystem::path> vocabulary_path;
  std::optional<std::filesystem::path> dos_path;
  std::optional<std::filesystem::path> donts_path;
  std::optional<std::filesystem::path> atomic_actions_path;
  std::optional<std::filesystem::path> context_actions_path;
  std::filesystem::path out_dir = ".";
  double threshold = 0.0;
  std::vector<std::string> anchors = {"kill", "murder", "slaughter"};
  std::size_t k = 10;
  bool include_association_words = false;
  double dominance_threshold = 2.0;
};

Template resolve_template(const RunConfig& config);
AssociationSets resolve_association_sets(const RunConfig& config);

struct CorrelationStudy {
  std::vector<CorrelationRow> rows;
  CorrelationReport report;
  std::vector<std::filesystem::path> written;
};

// Scores each word by WEAT and MCM bias and correlates the two. Words come from
// extract_verbs over the vocabulary, or directly from dos/donts lists.
CorrelationStudy correlation_rows_to_study(std::vector<CorrelationRow> rows);
CorrelationStudy run_correlation_study(const RunConfig& config, const EmbeddingSource& source);

struct SubspaceStudy {
  MoralSubspace subspace;
  std::vector<ScoredAction> scores;  // ascending by m
  std::vector<Projection2d> projection;
  std::vector<std::string> warnings;
  bool dominant = false;
  std::vector<std::filesystem::path> written;
};

SubspaceStudy run_subspace_study(const RunConfig& config, const EmbeddingSource& source);

}  // namespace mcm

#endif  // MCM_REPORT_H_
