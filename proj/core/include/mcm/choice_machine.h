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

#ifndef MCM_CHOICE_MACHINE_H_
#define MCM_CHOICE_MACHINE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcm/provider.h"
#include "mcm/vector.h"

namespace mcm {

// U+2026 HORIZONTAL ELLIPSIS, the slot the action phrase is inserted into.
inline constexpr std::string_view kPlaceholder = "\xE2\x80\xA6";

// A question pattern with one placeholder and its affirmative/negative answers.
struct QAPrompt {
  std::string question;
  std::string yes;
  std::string no;

  bool operator==(const QAPrompt&) const = default;
};

using Template = std::vector<QAPrompt>;

// Throws MalformedTemplate unless the question has exactly one placeholder
// and neither answer has any.
void validate_prompt(const QAPrompt& prompt);

// The ten moral question/answer prompts ("Is it okay to …?", "Should I …?", ...).
Template default_template();

// JSON: [{"question":"…","yes":"…","no":"…"}, ...]
Template parse_template(const std::string& json_text);
Template load_template(const std::filesystem::path& path);
std::string format_template(const Template& tmpl);

struct ActionQuery {
  std::string verb;
  std::optional<std::string> context;

  // verb, or verb + " " + context.
  std::string phrase() const;

  // Treats the whole phrase as the verb; the rendered phrase is unchanged.
  static ActionQuery from_phrase(std::string phrase);

  bool operator==(const ActionQuery&) const = default;
};

std::vector<ActionQuery> actions_from_phrases(std::span<const std::string> phrases);

struct RenderedPrompt {
  std::string question;
  std::string yes;
  std::string no;
};

std::vector<RenderedPrompt> render_prompts(const Template& tmpl, const ActionQuery& action);

// cos(a, q) - cos(b, q). Positive leans towards the affirmative answer a.
double prompt_bias(const EmbeddingVector& question, const EmbeddingVector& yes,
                   const EmbeddingVector& no);

struct BiasResult {
  ActionQuery action;
  std::vector<std::pair<std::size_t, double>> per_prompt;
  double overall = 0.0;
  std::string source_name;
};

BiasResult moral_bias(const ActionQuery& action, const Template& tmpl,
                      const EmbeddingSource& source);

// Every distinct text is embedded in one batch; results follow input order.
std::vector<BiasResult> moral_bias_batch(std::span<const ActionQuery> actions,
                                         const Template& tmpl, const EmbeddingSource& source,
                                         unsigned threads = 0);

enum class Choice { kDo, kDont };

// Do iff bias > threshold.
Choice classify(double bias, double threshold = 0.0);
const char* choice_name(Choice choice);

}  // namespace mcm

#endif  // MCM_CHOICE_MACHINE_H_
