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

#include "mcm/report.h"

#include <cmath>
#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "mcm/error.h"
#include "mcm/format.h"
#include "test_util.h"

namespace mcm {
namespace {

TEST(Csv, QuotingRoundTrip) {
  std::vector<CsvRow> rows{{"plain", "with,comma", "with \"quote\""}, {"multi\nline", "", "x"}};
  auto text = to_csv({"a", "b", "c"}, rows);
  auto back = parse_csv(text);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[1], rows[0]);
  EXPECT_EQ(back[2], rows[1]);
  EXPECT_EQ(csv_line({"a,b", "c"}), "\"a,b\",c\n");
  EXPECT_THROW(parse_csv("\"open"), Error);
}

TEST(Csv, CorrelationAndScoresRoundTrip) {
  std::mt19937_64 rng(6);
  std::vector<CorrelationRow> rows;
  for (int i = 0; i < 20; ++i) {
    auto v = testing::random_values(rng, 2);
    rows.push_back({"w" + std::to_string(i), v[0], v[1], i % 2 ? Choice::kDont : Choice::kDo});
  }
  rows.push_back({"fête, \"quoted\"", 0.1, -0.2, Choice::kDo});
  EXPECT_EQ(parse_correlation_csv(correlation_csv(rows)), rows);

  std::vector<ScoredAction> scores{{{"kill", "people"}, 1.25}, {{"smile", {}}, -3e-9}};
  auto back = parse_moral_scores_csv(moral_scores_csv(scores));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].action.phrase(), "kill people");
  EXPECT_EQ(back[1].m, -3e-9);
}

TEST(SortByScore, AscendingWithPhraseTies) {
  std::vector<ScoredAction> s{{{"b", {}}, 1.0}, {{"a", {}}, 1.0}, {{"c", {}}, -2.0}};
  sort_by_score(s);
  EXPECT_EQ(s[0].action.verb, "c");
  EXPECT_EQ(s[1].action.verb, "a");
  EXPECT_EQ(s[2].action.verb, "b");
}

TEST(BiasResultsCsv, Columns) {
  HashSource src(16, 1);
  std::vector<ActionQuery> actions{{"smile", {}}};
  auto res = moral_bias_batch(actions, default_template(), src);
  auto rows = parse_csv(bias_results_csv(res, 0.0));
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_EQ(rows[0].size(), 13u);
  EXPECT_EQ(rows[0][1], "bias_0");
  EXPECT_EQ(rows[0][11], "overall");
  EXPECT_EQ(parse_double(rows[1][11]), res[0].overall);
  EXPECT_EQ(rows[1][12], res[0].overall > 0 ? "Do" : "Dont");
}

TEST(SourceSpec, Parsing) {
  auto h = parse_source_spec("hash:7:64");
  EXPECT_EQ(h.kind, SourceSpec::Kind::kHash);
  EXPECT_EQ(h.seed, 7u);
  EXPECT_EQ(h.dim, 64u);
  EXPECT_EQ(parse_source_spec("hash", 3, 12).dim, 12u);
  EXPECT_EQ(parse_source_spec("file:/x.jsonl").path, "/x.jsonl");
  EXPECT_EQ(parse_source_spec("remote:http://h:1").url, "http://h:1");
  for (const char* bad : {"nope", "hash:x:3", "hash:1", "file:"}) {
    try {
      parse_source_spec(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUsage) << bad;
    }
  }
}

TEST(Fixture, LoadsJsonObject) {
  auto dir = testing::scratch_dir("fixture");
  write_file_atomic(dir / "fx.json", R"({"a":[1,0],"b":[0,1]})");
  auto src = load_fixture(dir / "fx.json");
  EXPECT_EQ(embed_one(src, "b"), (EmbeddingVector{0, 1}));
  write_file_atomic(dir / "bad.json", R"({"a":[1,0],"b":[0,1,2]})");
  EXPECT_THROW(load_fixture(dir / "bad.json"), Error);
}

TEST(CorrelationStudy, IdentityRelationGivesOne) {
  std::vector<CorrelationRow> rows;
  for (int i = 0; i < 10; ++i) {
    const double v = std::sin(i * 1.3);
    rows.push_back({"w" + std::to_string(i), v, v, v > 0 ? Choice::kDo : Choice::kDont});
  }
  auto study = correlation_rows_to_study(rows);
  EXPECT_NEAR(study.report.r, 1.0, 1e-12);
  EXPECT_EQ(study.report.p_two_tailed, 0.0);
  EXPECT_EQ(study.report.stars, 3);
}

TEST(CorrelationStudy, HashSmokeRun) {
  auto dir = testing::scratch_dir("corr_smoke");
  RunConfig cfg;
  cfg.dos_path = data_dir() / "dos.txt";
  cfg.donts_path = data_dir() / "donts.txt";
  cfg.out_dir = dir;
  HashSource src(64, 42);
  auto study = run_correlation_study(cfg, src);
  EXPECT_EQ(study.rows.size(), 100u);
  EXPECT_TRUE(std::isfinite(study.report.r));
  EXPECT_EQ(parse_correlation_csv(read_file(dir / "correlation.csv")), study.rows);
  EXPECT_TRUE(std::filesystem::exists(dir / "correlation.svg"));
}

TEST(CorrelationStudy, ExtractedFromVocabularyKTen) {
  auto dir = testing::scratch_dir("corr_vocab");
  std::string vocab;
  for (const auto& w : read_word_list(data_dir() / "dos.txt")) vocab += w + "\n";
  for (const auto& w : read_word_list(data_dir() / "donts.txt")) vocab += w + "\n";
  write_file_atomic(dir / "vocab.txt", vocab);
  RunConfig cfg;
  cfg.vocabulary_path = dir / "vocab.txt";
  cfg.out_dir = dir;
  HashSource src(64, 42);
  auto study = run_correlation_study(cfg, src);
  EXPECT_EQ(study.rows.size(), 20u);
  EXPECT_EQ(parse_csv(read_file(dir / "correlation.csv")).size(), 21u);
}

TEST(CorrelationStudy, NeedsWords) {
  RunConfig cfg;
  HashSource src(8, 1);
  try {
    run_correlation_study(cfg, src);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
  }
}

TEST(SubspaceStudy, AnchorsOnPositiveSideAndDeterministic) {
  RunConfig cfg;
  HashSource src(48, 42);
  auto a_dir = testing::scratch_dir("sub_a");
  auto b_dir = testing::scratch_dir("sub_b");
  cfg.out_dir = a_dir;
  auto a = run_subspace_study(cfg, src);
  cfg.out_dir = b_dir;
  auto b = run_subspace_study(cfg, src);
  EXPECT_EQ(a.subspace.n_samples, read_word_list(data_dir() / "atomic_actions.txt").size());
  double anchor_mean = 0;
  for (const auto& s : a.scores) {
    for (const auto& anchor : cfg.anchors) {
      if (s.action.phrase() == anchor) anchor_mean += s.m / cfg.anchors.size();
    }
  }
  EXPECT_GE(anchor_mean, 0.0);
  for (std::size_t i = 1; i < a.scores.size(); ++i) EXPECT_LE(a.scores[i - 1].m, a.scores[i].m);
  for (const char* f : {"subspace.json", "variance.csv", "moral_scores.csv", "projection.csv",
                        "projection.svg", "variance.svg"}) {
    EXPECT_EQ(read_file(a_dir / f), read_file(b_dir / f)) << f;
  }
}

TEST(Svg, DeterministicAndWellFormed) {
  std::vector<ScatterPoint> pts{{0, 1, "a", 0}, {1, 2, "b&<c>", 1}, {2, 2.5, "c", 0}};
  ScatterOptions opt{"T", "x", "y", {"Do", "Dont"}, true, true};
  auto s = scatter_svg(pts, opt);
  EXPECT_EQ(s, scatter_svg(pts, opt));
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("b&amp;&lt;c&gt;"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  auto bars = bar_svg({0.7, 0.2, 0.1}, "Variance");
  EXPECT_EQ(bars, bar_svg({0.7, 0.2, 0.1}, "Variance"));
}

TEST(WriteFileAtomic, ReplacesContent) {
  auto dir = testing::scratch_dir("atomic");
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  EXPECT_EQ(read_file(dir / "f.txt"), "two");
  EXPECT_FALSE(std::filesystem::exists(dir / "f.txt.tmp"));
  EXPECT_THROW(write_file_atomic(dir / "missing" / "f.txt", "x"), Error);
}

}  // namespace
}  // namespace mcm
