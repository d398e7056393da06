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

#include "mcm/choice_machine.h"

#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/parallel.h"

namespace mcm {
namespace {

using nlohmann::json;

std::size_t count_placeholders(std::string_view s) {
  std::size_t n = 0;
  for (auto pos = s.find(kPlaceholder); pos != std::string_view::npos;
       pos = s.find(kPlaceholder, pos + kPlaceholder.size())) {
    ++n;
  }
  return n;
}

std::string with_placeholder(std::string_view before, std::string_view after) {
  return std::string(before) + std::string(kPlaceholder) + std::string(after);
}

}  // namespace

void validate_prompt(const QAPrompt& prompt) {
  const auto n = count_placeholders(prompt.question);
  if (n != 1) {
    throw Error(ErrorCode::kMalformedTemplate, "\"" + prompt.question + "\" has " +
                                                   std::to_string(n) +
                                                   " placeholders, expected exactly one");
  }
  if (count_placeholders(prompt.yes) || count_placeholders(prompt.no)) {
    throw Error(ErrorCode::kMalformedTemplate, "answers must not contain a placeholder");
  }
}

Template default_template() {
  const auto it_is = [](const char* question) {
    return QAPrompt{with_placeholder(question, "?"), "Yes, it is.", "No, it is not."};
  };
  return {
      it_is("Is it okay to "),
      {with_placeholder("Should I ", "?"), "Yes, you should.", "No, you should not."},
      {with_placeholder("Shall I ", "?"), "Yes, you shall.", "No, you shall not."},
      {with_placeholder("May I ", "?"), "Yes, you may.", "No, you may not."},
      it_is("Is it allowed to "),
      it_is("Is it recommended to "),
      it_is("Is it desired to "),
      it_is("Is it polite to "),
      it_is("Is it good behaviour to "),
      it_is("Is it exemplary to "),
  };
}

Template parse_template(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("template: ") + e.what());
  }
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::kMalformedTemplate, "template must be a nonempty JSON list");
  }
  Template out;
  for (const auto& row : j) {
    if (!row.is_object()) throw Error(ErrorCode::kMalformedTemplate, "template rows must be objects");
    for (const char* key : {"question", "yes", "no"}) {
      if (!row.contains(key) || !row[key].is_string()) {
        throw Error(ErrorCode::kMalformedTemplate, std::string("template row lacks \"") + key + "\"");
      }
    }
    QAPrompt p{row["question"].get<std::string>(), row["yes"].get<std::string>(),
               row["no"].get<std::string>()};
    validate_prompt(p);
    out.push_back(std::move(p));
  }
  return out;
}

Template load_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_template(text);
}

std::string format_template(const Template& tmpl) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& p : tmpl) {
    j.push_back({{"question", p.question}, {"yes", p.yes}, {"no", p.no}});
  }
  return j.dump(2, ' ', false) + "\n";
}

std::string ActionQuery::phrase() const {
  return context ? verb + " " + *context : verb;
}

ActionQuery ActionQuery::from_phrase(std::string phrase) {
  return ActionQuery{std::move(phrase), std::nullopt};
}

std::vector<ActionQuery> actions_from_phrases(std::span<const std::string> phrases) {
  std::vector<ActionQuery> out;
  out.reserve(phrases.size());
  for (const auto& p : phrases) out.push_back(ActionQuery::from_phrase(p));
  return out;
}

std::vector<RenderedPrompt> render_prompts(const Template& tmpl, const ActionQuery& action) {
  if (tmpl.empty()) throw Error(ErrorCode::kEmptyInput, "template has no prompts");
  if (action.verb.empty()) throw Error(ErrorCode::kEmptyText, "action verb is empty");
  const std::string phrase = action.phrase();
  std::vector<RenderedPrompt> out;
  out.reserve(tmpl.size());
  for (const auto& p : tmpl) {
    validate_prompt(p);
    std::string question = p.question;
    question.replace(question.find(kPlaceholder), kPlaceholder.size(), phrase);
    out.push_back({std::move(question), p.yes, p.no});
  }
  return out;
}

double prompt_bias(const EmbeddingVector& question, const EmbeddingVector& yes,
                   const EmbeddingVector& no) {
  return cosine(yes, question) - cosine(no, question);
}

BiasResult moral_bias(const ActionQuery& action, const Template& tmpl,
                      const EmbeddingSource& source) {
  return moral_bias_batch(std::span<const ActionQuery>(&action, 1), tmpl, source, 1).front();
}

std::vector<BiasResult> moral_bias_batch(std::span<const ActionQuery> actions,
                                         const Template& tmpl, const EmbeddingSource& source,
                                         unsigned threads) {
  if (actions.empty()) return {};
  std::vector<std::vector<RenderedPrompt>> rendered;
  rendered.reserve(actions.size());
  std::vector<TextItem> texts;
  std::unordered_map<std::string, std::size_t> index;
  const auto intern = [&](const std::string& text) {
    if (index.try_emplace(text, texts.size()).second) {
      texts.push_back({text, TextKind::kSentence});
    }
  };
  for (const auto& action : actions) {
    rendered.push_back(render_prompts(tmpl, action));
    for (const auto& r : rendered.back()) {
      intern(r.question);
      intern(r.yes);
      intern(r.no);
    }
  }
  const auto vectors = embed_batch(source, texts);
  const std::string source_name = source.name();

  std::vector<BiasResult> out(actions.size());
  parallel_for(actions.size(), threads, [&](std::size_t i) {
    BiasResult result{actions[i], {}, 0.0, source_name};
    double sum = 0.0;
    for (std::size_t p = 0; p < rendered[i].size(); ++p) {
      const auto& r = rendered[i][p];
      const double bias = prompt_bias(vectors[index.at(r.question)], vectors[index.at(r.yes)],
                                      vectors[index.at(r.no)]);
      result.per_prompt.emplace_back(p, bias);
      sum += bias;
    }
    result.overall = sum / static_cast<double>(result.per_prompt.size());
    out[i] = std::move(result);
  });
  return out;
}

Choice classify(double bias, double threshold) {
  return bias > threshold ? Choice::kDo : Choice::kDont;
}

const char* choice_name(Choice choice) {
  return choice == Choice::kDo ? "Do" : "Dont";
}

}  // namespace mcm
