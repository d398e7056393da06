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

#include <cmath>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/format.h"
#include "mcm/report.h"

#ifndef MCM_SOURCE_DATA_DIR
#define MCM_SOURCE_DATA_DIR ""
#endif
#ifndef MCM_INSTALL_DATA_DIR
#define MCM_INSTALL_DATA_DIR ""
#endif

namespace mcm {
namespace {

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || s.front() == '-') throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kUsage, std::string("bad ") + what + " \"" + s + "\"");
  }
}

std::filesystem::path or_default(const std::optional<std::filesystem::path>& p,
                                 const char* file) {
  return p ? *p : data_dir() / file;
}

std::vector<std::string> words_of(const RankedVocabulary& ranked) {
  std::vector<std::string> out;
  for (const auto& e : ranked) out.push_back(e.word);
  return out;
}

}  // namespace

SourceSpec parse_source_spec(const std::string& spec, std::uint64_t default_seed,
                             std::size_t default_dim) {
  SourceSpec out;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "hash") {
    out.kind = SourceSpec::Kind::kHash;
    out.seed = default_seed;
    out.dim = default_dim;
    if (colon != std::string::npos) {
      const auto second = rest.find(':');
      if (second == std::string::npos) {
        throw Error(ErrorCode::kUsage, "hash source is hash or hash:<seed>:<dim>");
      }
      out.seed = parse_u64(rest.substr(0, second), "seed");
      out.dim = parse_u64(rest.substr(second + 1), "dim");
    }
    if (out.dim < 2) throw Error(ErrorCode::kUsage, "hash dim must be at least 2");
  } else if (kind == "file" || kind == "fixture") {
    if (rest.empty()) throw Error(ErrorCode::kUsage, kind + " source needs a path");
    out.kind = kind == "file" ? SourceSpec::Kind::kFile : SourceSpec::Kind::kFixture;
    out.path = rest;
  } else if (kind == "remote") {
    out.kind = SourceSpec::Kind::kRemote;
    out.url = rest;
    if (out.url.empty()) {
      const char* env = std::getenv("MCM_EMBED_URL");
      if (!env || !*env) {
        throw Error(ErrorCode::kUsage, "remote source needs a URL or MCM_EMBED_URL");
      }
      out.url = env;
    }
  } else {
    throw Error(ErrorCode::kUsage, "unknown source \"" + spec + "\"");
  }
  return out;
}

StoreSource load_fixture(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.empty()) {
    throw Error(ErrorCode::kFormat, "fixture must be a nonempty JSON object");
  }
  std::map<std::string, EmbeddingVector> entries;
  for (const auto& [text, v] : j.items()) {
    if (!v.is_array()) throw Error(ErrorCode::kFormat, "fixture values must be arrays");
    std::vector<double> values;
    for (const auto& x : v) {
      if (!x.is_number()) throw Error(ErrorCode::kFormat, "fixture vectors must hold numbers");
      values.push_back(x.get<double>());
    }
    entries.emplace(text, EmbeddingVector(std::move(values)));
  }
  const auto dim = entries.begin()->second.dim();
  for (const auto& [text, v] : entries) {
    if (v.dim() != dim) throw Error(ErrorCode::kDimensionMismatch, "fixture dims differ at \"" + text + "\"");
  }
  return StoreSource::from_map("fixture:" + path.filename().string(), entries);
}

std::shared_ptr<const EmbeddingSource> make_source(const SourceSpec& spec) {
  std::shared_ptr<const EmbeddingSource> inner;
  switch (spec.kind) {
    case SourceSpec::Kind::kHash:
      inner = std::make_shared<HashSource>(spec.dim, spec.seed);
      break;
    case SourceSpec::Kind::kFile:
      inner = std::make_shared<StoreSource>(StoreSource::from_file(spec.path));
      break;
    case SourceSpec::Kind::kFixture:
      inner = std::make_shared<StoreSource>(load_fixture(spec.path));
      break;
    case SourceSpec::Kind::kRemote:
      inner = std::make_shared<RemoteSource>(spec.url, RemoteOptions{spec.timeout});
      break;
  }
  return cached(std::move(inner));
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("MCM_DATA_DIR"); env && *env) return env;
  const std::filesystem::path source_dir = MCM_SOURCE_DATA_DIR;
  if (!source_dir.empty() && std::filesystem::exists(source_dir / "template.json")) {
    return source_dir;
  }
  return MCM_INSTALL_DATA_DIR;
}

Template resolve_template(const RunConfig& config) {
  return config.template_path ? load_template(*config.template_path) : default_template();
}

AssociationSets resolve_association_sets(const RunConfig& config) {
  return load_association_sets(or_default(config.association_path, "association_sets.json"));
}

CorrelationStudy correlation_rows_to_study(std::vector<CorrelationRow> rows) {
  std::vector<double> weat, bias;
  for (const auto& r : rows) {
    weat.push_back(r.weat);
    bias.push_back(r.bias);
  }
  CorrelationStudy study;
  study.report = correlate(weat, bias);
  study.rows = std::move(rows);
  return study;
}

CorrelationStudy run_correlation_study(const RunConfig& config, const EmbeddingSource& source) {
  const auto tmpl = resolve_template(config);
  const auto sets = resolve_association_sets(config);

  std::vector<std::string> dos, donts;
  if (config.dos_path && config.donts_path) {
    dos = read_word_list(*config.dos_path);
    donts = read_word_list(*config.donts_path);
  } else if (config.vocabulary_path) {
    const auto vocab = read_word_list(*config.vocabulary_path);
    ExtractionOptions options;
    options.include_association_words = config.include_association_words;
    const auto extraction = extract_verbs(vocab, source, sets, config.k, options);
    dos = words_of(extraction.dos);
    donts = words_of(extraction.donts);
  } else {
    throw Error(ErrorCode::kUsage, "correlation study needs a vocabulary or dos/donts lists");
  }

  std::vector<std::string> words(dos);
  words.insert(words.end(), donts.begin(), donts.end());
  ExtractionOptions all;
  all.include_association_words = true;
  // Lists may overlap each other; rank each word independently.
  std::unordered_map<std::string, double> weat;
  {
    std::vector<std::string> distinct;
    std::unordered_set<std::string> seen;
    for (const auto& w : words) {
      if (seen.insert(w).second) distinct.push_back(w);
    }
    for (const auto& e : rank_vocabulary(distinct, source, sets, all)) weat[e.word] = e.score;
  }
  const auto actions = actions_from_phrases(words);
  const auto biases = moral_bias_batch(actions, tmpl, source);

  std::vector<CorrelationRow> rows;
  for (std::size_t i = 0; i < words.size(); ++i) {
    rows.push_back({words[i], weat.at(words[i]), biases[i].overall,
                    i < dos.size() ? Choice::kDo : Choice::kDont});
  }
  auto study = correlation_rows_to_study(std::move(rows));

  std::filesystem::create_directories(config.out_dir);
  std::vector<ScatterPoint> points;
  for (const auto& r : study.rows) {
    points.push_back({r.weat, r.bias, r.word, r.group == Choice::kDo ? 0 : 1});
  }
  ScatterOptions opts;
  opts.title = "MCM bias vs WEAT (r = " + format_double(std::round(study.report.r * 1e4) / 1e4) +
               ", " + std::string(static_cast<std::size_t>(study.report.stars), '*') + ")";
  opts.x_label = "WEAT value";
  opts.y_label = "moral bias";
  opts.group_names = {"Dos", "Don'ts"};
  opts.fit_line = true;

  const auto put = [&](const char* name, const std::string& content) {
    const auto path = config.out_dir / name;
    write_file_atomic(path, content);
    study.written.push_back(path);
  };
  put("correlation.csv", correlation_csv(study.rows));
  put("correlation.json", correlation_report_json(study.report));
  put("correlation.svg", scatter_svg(points, opts));
  return study;
}

SubspaceStudy run_subspace_study(const RunConfig& config, const EmbeddingSource& source) {
  const auto tmpl = resolve_template(config);
  const auto atomic = read_word_list(or_default(config.atomic_actions_path, "atomic_actions.txt"));
  const auto context = read_word_list(or_default(config.context_actions_path, "context_actions.txt"));
  const auto atomic_actions = actions_from_phrases(atomic);
  const auto anchor = actions_from_phrases(config.anchors);

  SubspaceStudy study;
  study.subspace = fit_subspace(atomic_actions, tmpl, source, anchor, &study.warnings);
  study.dominant = study.subspace.dominance_ratio() >= config.dominance_threshold;

  std::vector<std::string> scored(atomic);
  std::unordered_set<std::string> seen(atomic.begin(), atomic.end());
  std::vector<int> kind(atomic.size(), 0);
  for (const auto& c : context) {
    if (seen.insert(c).second) {
      scored.push_back(c);
      kind.push_back(1);
    }
  }
  const auto scored_actions = actions_from_phrases(scored);
  const auto embeddings = action_embeddings(scored_actions, tmpl, source);
  std::vector<ScatterPoint> points;
  std::vector<CsvRow> projection_rows;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const auto [x, y] = project_2d(embeddings[i], study.subspace);
    study.scores.push_back({scored_actions[i], x});
    study.projection.push_back({scored_actions[i], x, y});
    points.push_back({x, y, scored[i], kind[i]});
    projection_rows.push_back({scored[i], format_double(x), format_double(y),
                               kind[i] == 0 ? "atomic" : "context"});
  }
  sort_by_score(study.scores);

  std::vector<CsvRow> variance_rows;
  for (std::size_t i = 0; i < study.subspace.variance_ratios.size(); ++i) {
    variance_rows.push_back({std::to_string(i + 1), format_double(study.subspace.variance_ratios[i])});
  }
  ScatterOptions opts;
  opts.title = "Actions projected on the moral subspace";
  opts.x_label = "moral direction m (PC1)";
  opts.y_label = "PC2";
  opts.group_names = {"atomic", "context"};
  opts.label_points = true;

  std::filesystem::create_directories(config.out_dir);
  const auto put = [&](const char* name, const std::string& content) {
    const auto path = config.out_dir / name;
    write_file_atomic(path, content);
    study.written.push_back(path);
  };
  put("subspace.json", subspace_to_json(study.subspace));
  put("variance.csv", to_csv({"component", "variance_ratio"}, variance_rows));
  put("moral_scores.csv", moral_scores_csv(study.scores));
  put("projection.csv", to_csv({"action", "x", "y", "kind"}, projection_rows));
  put("projection.svg", scatter_svg(points, opts));
  put("variance.svg", bar_svg(study.subspace.variance_ratios, "Explained variance ratio"));
  return study;
}

}  // namespace mcm
