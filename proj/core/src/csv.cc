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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "mcm/error.h"
#include "mcm/format.h"
#include "mcm/report.h"

namespace mcm {
namespace {

bool needs_quotes(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

Choice parse_choice(const std::string& s) {
  if (s == "Do") return Choice::kDo;
  if (s == "Dont") return Choice::kDont;
  throw Error(ErrorCode::kFormat, "unknown group \"" + s + "\"");
}

}  // namespace

std::string csv_line(const CsvRow& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    if (needs_quotes(fields[i])) {
      out += '"';
      for (char c : fields[i]) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    } else {
      out += fields[i];
    }
  }
  out += '\n';
  return out;
}

std::string to_csv(const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::string out = csv_line(header);
  for (const auto& r : rows) out += csv_line(r);
  return out;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool row_open = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    row_open = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      row_open = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw Error(ErrorCode::kFormat, "unterminated quoted CSV field");
  if (row_open) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bias_results_csv(const std::vector<BiasResult>& results, double threshold) {
  CsvRow header{"action"};
  const std::size_t prompts = results.empty() ? 0 : results.front().per_prompt.size();
  for (std::size_t p = 0; p < prompts; ++p) header.push_back("bias_" + std::to_string(p));
  header.push_back("overall");
  header.push_back("classification");
  std::vector<CsvRow> rows;
  for (const auto& r : results) {
    CsvRow row{r.action.phrase()};
    for (const auto& [idx, bias] : r.per_prompt) row.push_back(format_double(bias));
    row.push_back(format_double(r.overall));
    row.push_back(choice_name(classify(r.overall, threshold)));
    rows.push_back(std::move(row));
  }
  return to_csv(header, rows);
}

std::string bias_results_json(const std::vector<BiasResult>& results, double threshold) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["action"] = r.action.phrase();
    j["verb"] = r.action.verb;
    j["context"] = r.action.context ? nlohmann::ordered_json(*r.action.context)
                                    : nlohmann::ordered_json(nullptr);
    j["source"] = r.source_name;
    auto per = nlohmann::ordered_json::array();
    for (const auto& [idx, bias] : r.per_prompt) per.push_back({{"prompt", idx}, {"bias", bias}});
    j["per_prompt"] = per;
    j["overall"] = r.overall;
    j["classification"] = choice_name(classify(r.overall, threshold));
    out.push_back(j);
  }
  return out.dump(2) + "\n";
}

std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
  std::vector<CsvRow> body;
  for (const auto& r : rows) {
    body.push_back({r.word, format_double(r.weat), format_double(r.bias), choice_name(r.group)});
  }
  return to_csv({"word", "weat", "bias", "group"}, body);
}

std::vector<CorrelationRow> parse_correlation_csv(const std::string& text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != CsvRow{"word", "weat", "bias", "group"}) {
    throw Error(ErrorCode::kFormat, "correlation CSV header mismatch");
  }
  std::vector<CorrelationRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4) throw Error(ErrorCode::kFormat, "correlation CSV row width");
    out.push_back({rows[i][0], parse_double(rows[i][1]), parse_double(rows[i][2]),
                   parse_choice(rows[i][3])});
  }
  return out;
}

std::string correlation_report_json(const CorrelationReport& report) {
  nlohmann::ordered_json j;
  j["r"] = report.r;
  j["n"] = report.n;
  j["t_stat"] = report.t_stat;
  j["p_two_tailed"] = report.p_two_tailed;
  j["stars"] = report.stars;
  return j.dump(2) + "\n";
}

std::string ttest_report_json(const TTestReport& report) {
  nlohmann::ordered_json j;
  j["test"] = report.pooled ? "pooled" : "welch";
  j["mean_x"] = report.mean_x;
  j["mean_y"] = report.mean_y;
  j["std_x"] = report.std_x;
  j["std_y"] = report.std_y;
  j["n_x"] = report.n_x;
  j["n_y"] = report.n_y;
  j["t_stat"] = report.t_stat;
  j["dof"] = report.dof;
  j["p_two_tailed"] = report.p_two_tailed;
  j["stars"] = significance_stars(report.p_two_tailed);
  return j.dump(2) + "\n";
}

std::string moral_scores_csv(const std::vector<ScoredAction>& scores) {
  std::vector<CsvRow> body;
  for (const auto& s : scores) body.push_back({s.action.phrase(), format_double(s.m)});
  return to_csv({"action", "m"}, body);
}

std::vector<ScoredAction> parse_moral_scores_csv(const std::string& text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != CsvRow{"action", "m"}) {
    throw Error(ErrorCode::kFormat, "moral score CSV header mismatch");
  }
  std::vector<ScoredAction> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw Error(ErrorCode::kFormat, "moral score CSV row width");
    out.push_back({ActionQuery::from_phrase(rows[i][0]), parse_double(rows[i][1])});
  }
  return out;
}

void sort_by_score(std::vector<ScoredAction>& scores) {
  std::sort(scores.begin(), scores.end(), [](const ScoredAction& a, const ScoredAction& b) {
    if (a.m != b.m) return a.m < b.m;
    return a.action.phrase() < b.action.phrase();
  });
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace mcm
