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

#include "mcm/weat.h"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/parallel.h"

namespace mcm {
namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(ErrorCode::kFormat, std::string("association sets need a \"") + key + "\" array");
  }
  std::vector<std::string> out;
  for (const auto& w : j[key]) {
    if (!w.is_string()) throw Error(ErrorCode::kFormat, std::string(key) + " must hold strings");
    out.push_back(w.get<std::string>());
  }
  return out;
}

TextKind kind_of(const std::string& entry) {
  return entry.find_first_of(" \t") == std::string::npos ? TextKind::kWord : TextKind::kSentence;
}

std::vector<EmbeddingVector> embed_words(const EmbeddingSource& source,
                                         std::span<const std::string> words) {
  std::vector<TextItem> items;
  items.reserve(words.size());
  for (const auto& w : words) items.push_back({w, kind_of(w)});
  return embed_batch(source, items);
}

double mean_cosine(const EmbeddingVector& w, std::span<const EmbeddingVector> set) {
  double sum = 0.0;
  for (const auto& v : set) sum += cosine(w, v);
  return sum / static_cast<double>(set.size());
}

}  // namespace

void AssociationSets::validate() const {
  if (positive.empty() || negative.empty()) {
    throw Error(ErrorCode::kInvalidInput, "association sets must both be nonempty");
  }
  std::unordered_set<std::string> seen;
  for (const auto& w : positive) {
    if (!seen.insert(w).second) throw Error(ErrorCode::kInvalidInput, "duplicate word \"" + w + "\"");
  }
  std::unordered_set<std::string> seen_negative;
  for (const auto& w : negative) {
    if (!seen_negative.insert(w).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate word \"" + w + "\"");
    }
    if (seen.count(w)) {
      throw Error(ErrorCode::kInvalidInput, "\"" + w + "\" is in both association sets");
    }
  }
}

bool AssociationSets::contains(const std::string& word) const {
  return std::find(positive.begin(), positive.end(), word) != positive.end() ||
         std::find(negative.begin(), negative.end(), word) != negative.end();
}

AssociationSets parse_association_sets(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("association sets: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kFormat, "association sets must be a JSON object");
  AssociationSets sets{string_array(j, "positive"), string_array(j, "negative")};
  sets.validate();
  return sets;
}

AssociationSets load_association_sets(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_association_sets(text);
}

double association_score(const EmbeddingVector& w, std::span<const EmbeddingVector> positive,
                         std::span<const EmbeddingVector> negative) {
  if (positive.empty() || negative.empty()) {
    throw Error(ErrorCode::kEmptyInput, "association sets must both be nonempty");
  }
  return mean_cosine(w, positive) - mean_cosine(w, negative);
}

void sort_ranked(RankedVocabulary& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
  });
}

RankedVocabulary rank_vocabulary(std::span<const std::string> vocab, const EmbeddingSource& source,
                                 const AssociationSets& sets, const ExtractionOptions& options) {
  sets.validate();
  std::unordered_set<std::string> seen;
  std::vector<std::string> words;
  for (const auto& w : vocab) {
    if (!seen.insert(w).second) {
      throw Error(ErrorCode::kInvalidInput, "vocabulary repeats \"" + w + "\"");
    }
    if (options.include_association_words || !sets.contains(w)) words.push_back(w);
  }
  if (words.empty()) return {};

  const auto positive = embed_words(source, sets.positive);
  const auto negative = embed_words(source, sets.negative);
  const auto embedded = embed_words(source, words);

  RankedVocabulary ranked(words.size());
  parallel_for(words.size(), options.threads, [&](std::size_t i) {
    ranked[i] = {words[i], association_score(embedded[i], positive, negative)};
  });
  sort_ranked(ranked);
  return ranked;
}

Extraction extract_verbs(std::span<const std::string> vocab, const EmbeddingSource& source,
                         const AssociationSets& sets, std::size_t k,
                         const ExtractionOptions& options) {
  if (k == 0) throw Error(ErrorCode::kInvalidInput, "k must be at least 1");
  sets.validate();
  std::size_t eligible = 0;
  for (const auto& w : vocab) {
    if (options.include_association_words || !sets.contains(w)) ++eligible;
  }
  if (eligible < 2 * k) {
    throw Error(ErrorCode::kVocabularyTooSmall,
                std::to_string(eligible) + " eligible words, need " + std::to_string(2 * k));
  }

  Extraction out;
  out.ranked = rank_vocabulary(vocab, source, sets, options);
  out.dos.assign(out.ranked.begin(), out.ranked.begin() + static_cast<std::ptrdiff_t>(k));
  out.donts.assign(out.ranked.end() - static_cast<std::ptrdiff_t>(k), out.ranked.end());
  std::sort(out.donts.begin(), out.donts.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.word < b.word;
  });
  return out;
}

std::vector<std::string> parse_word_list(std::istream& in) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    std::string entry = line.substr(first, last - first + 1);
    if (entry.front() == '#') continue;
    if (!seen.insert(entry).second) {
      throw Error(ErrorCode::kFormat, "duplicate entry \"" + entry + "\"");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_word_list(in);
}

}  // namespace mcm
