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

#ifndef MCM_WEAT_H_
#define MCM_WEAT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mcm/provider.h"
#include "mcm/vector.h"

namespace mcm {

// Positive (A) and negative (B) word sets. Both nonempty, disjoint, no repeats.
struct AssociationSets {
  std::vector<std::string> positive;
  std::vector<std::string> negative;

  void validate() const;
  bool contains(const std::string& word) const;
};

// JSON: {"positive":[...],"negative":[...]}
AssociationSets parse_association_sets(const std::string& json_text);
AssociationSets load_association_sets(const std::filesystem::path& path);

struct RankedEntry {
  std::string word;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

using RankedVocabulary = std::vector<RankedEntry>;

// Mean cosine of w to A minus mean cosine of w to B.
double association_score(const EmbeddingVector& w, std::span<const EmbeddingVector> positive,
                         std::span<const EmbeddingVector> negative);

// Descending by score, ties by ascending word.
void sort_ranked(RankedVocabulary& entries);

struct ExtractionOptions {
  bool include_association_words = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Extraction {
  RankedVocabulary dos;     // k highest, descending
  RankedVocabulary donts;   // k lowest, most negative first
  RankedVocabulary ranked;  // every scored word, descending
};

// Entries containing whitespace are embedded as sentences, the rest as words.
RankedVocabulary rank_vocabulary(std::span<const std::string> vocab, const EmbeddingSource& source,
                                 const AssociationSets& sets, const ExtractionOptions& options = {});

Extraction extract_verbs(std::span<const std::string> vocab, const EmbeddingSource& source,
                         const AssociationSets& sets, std::size_t k,
                         const ExtractionOptions& options = {});

// One entry per line, '#' starts a comment line, surrounding whitespace and
// blank lines are dropped. Duplicates are rejected.
std::vector<std::string> parse_word_list(std::istream& in);
std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace mcm

#endif  // MCM_WEAT_H_
