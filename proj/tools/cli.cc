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

#include "cli.h"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcm/choice_machine.h"
#include "mcm/error.h"
#include "mcm/format.h"
#include "mcm/provider.h"
#include "mcm/report.h"
#include "mcm/stats.h"
#include "mcm/subspace.h"
#include "mcm/weat.h"

namespace mcm::cli {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string source = "hash";
  std::optional<fs::path> template_path;
  std::optional<fs::path> out_dir;
  std::uint64_t seed = 42;
  std::size_t dim = 256;
  double threshold = 0.0;
  std::string format = "json";
  int timeout_ms = 30000;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

std::shared_ptr<const EmbeddingSource> open_source(const Globals& g) {
  auto spec = parse_source_spec(g.source, g.seed, g.dim);
  spec.timeout = std::chrono::milliseconds(g.timeout_ms);
  return make_source(spec);
}

Template open_template(const Globals& g) {
  return g.template_path ? load_template(*g.template_path) : default_template();
}

fs::path out_dir(const Globals& g) { return g.out_dir.value_or(fs::path(".")); }

// Prints `content` and mirrors it into <out>/<name> when --out is given.
void emit(const Globals& g, const Io& io, const std::string& name, const std::string& content) {
  io.out << content;
  if (g.out_dir) {
    fs::create_directories(*g.out_dir);
    write_file_atomic(*g.out_dir / name, content);
  }
}

std::vector<std::string> collect_actions(const std::vector<std::string>& inline_actions,
                                         const std::optional<fs::path>& file) {
  std::vector<std::string> phrases = inline_actions;
  if (file) {
    auto from_file = read_word_list(*file);
    phrases.insert(phrases.end(), from_file.begin(), from_file.end());
  }
  return phrases;
}

std::string ranked_csv(const Extraction& e) {
  std::vector<CsvRow> rows;
  for (const auto& d : e.dos) rows.push_back({d.word, format_double(d.score), "Do"});
  for (const auto& d : e.donts) rows.push_back({d.word, format_double(d.score), "Dont"});
  return to_csv({"word", "weat", "group"}, rows);
}

std::string ranked_json(const Extraction& e) {
  nlohmann::ordered_json j;
  const auto list = [](const RankedVocabulary& v) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& d : v) a.push_back({{"word", d.word}, {"weat", d.score}});
    return a;
  };
  j["dos"] = list(e.dos);
  j["donts"] = list(e.donts);
  return j.dump(2) + "\n";
}

std::string scores_json(const std::vector<ScoredAction>& scores) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& s : scores) a.push_back({{"action", s.action.phrase()}, {"m", s.m}});
  return a.dump(2) + "\n";
}

std::string subspace_summary(const MoralSubspace& sub, double dominance_threshold) {
  std::ostringstream s;
  s << "variance_ratios:";
  for (double v : sub.variance_ratios) s << ' ' << format_double(v);
  s << "\npc1/pc2: " << format_double(sub.dominance_ratio()) << " ("
    << (sub.dominance_ratio() >= dominance_threshold ? "dominant" : "not dominant")
    << " at threshold " << format_double(dominance_threshold) << ")\n";
  return s.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  Io io{out, err};

  CLI::App app{"Moral bias toolkit for text embeddings", "mcm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--source", g.source,
                 "Embedding source: hash | hash:<seed>:<dim> | file:<path> | fixture:<path> | "
                 "remote:[<url>]")
      ->capture_default_str();
  app.add_option("--template", g.template_path, "Question/answer template JSON");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--seed", g.seed, "Seed for the hash source")->capture_default_str();
  app.add_option("--dim", g.dim, "Dimension for the hash source")->capture_default_str();
  app.add_option("--threshold", g.threshold, "Do/Don't classification threshold")
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--timeout-ms", g.timeout_ms, "Remote request timeout")->capture_default_str();

  // extract
  auto* extract = app.add_subcommand("extract", "Rank a vocabulary into Dos and Don'ts by WEAT");
  fs::path extract_vocab;
  std::optional<fs::path> extract_sets;
  std::size_t extract_k = 10;
  bool extract_include = false;
  extract->add_option("--vocab", extract_vocab, "Vocabulary file, one entry per line")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--associations", extract_sets, "Association sets JSON");
  extract->add_option("-k", extract_k, "Number of Dos and of Don'ts")->capture_default_str();
  extract->add_flag("--include-association-words", extract_include,
                    "Rank words that belong to the association sets too");

  // score
  auto* score = app.add_subcommand("score", "Moral bias of actions via question/answer prompts");
  std::vector<std::string> score_actions;
  std::optional<fs::path> score_file;
  score->add_option("--action", score_actions, "Action phrase (repeatable)");
  score->add_option("--actions", score_file, "File of action phrases")->check(CLI::ExistingFile);

  // correlate
  auto* corr = app.add_subcommand("correlate", "Correlate WEAT values with moral bias");
  RunConfig corr_cfg;
  std::optional<fs::path> corr_vocab, corr_dos, corr_donts, corr_sets;
  corr->add_option("--vocab", corr_vocab, "Vocabulary to extract Dos/Don'ts from")
      ->check(CLI::ExistingFile);
  corr->add_option("--dos", corr_dos, "Fixed Dos list (skips extraction)")->check(CLI::ExistingFile);
  corr->add_option("--donts", corr_donts, "Fixed Don'ts list (skips extraction)")
      ->check(CLI::ExistingFile);
  corr->add_option("--associations", corr_sets, "Association sets JSON");
  corr->add_option("-k", corr_cfg.k, "Number of Dos and of Don'ts")->capture_default_str();
  corr->add_flag("--include-association-words", corr_cfg.include_association_words);

  // subspace
  auto* sub = app.add_subcommand("subspace", "Moral subspace by PCA");
  sub->require_subcommand(1);
  std::optional<fs::path> sub_actions, sub_context, sub_file;
  std::vector<std::string> sub_anchor = {"kill", "murder", "slaughter"};
  std::vector<std::string> sub_inline;
  double dominance = 2.0;
  auto* sub_fit = sub->add_subcommand("fit", "Fit the subspace on atomic actions");
  sub_fit->add_option("--actions", sub_actions, "Atomic actions file (default: shipped list)")
      ->check(CLI::ExistingFile);
  sub_fit->add_option("--anchor", sub_anchor, "Actions oriented to the positive side")
      ->delimiter(',')
      ->capture_default_str();
  sub_fit->add_option("--dominance", dominance, "PC1/PC2 ratio reported as dominant")
      ->capture_default_str();
  auto* sub_score = sub->add_subcommand("score", "Project actions onto the moral direction");
  sub_score->add_option("--subspace", sub_file, "Fitted subspace JSON (default: <out>/subspace.json)");
  sub_score->add_option("--action", sub_inline, "Action phrase (repeatable)");
  sub_score->add_option("--actions", sub_context, "Actions file (default: shipped atomic + context)")
      ->check(CLI::ExistingFile);
  auto* sub_plot = sub->add_subcommand("plot", "2D projection CSV and SVG");
  sub_plot->add_option("--subspace", sub_file, "Fitted subspace JSON (default: <out>/subspace.json)");
  sub_plot->add_option("--actions", sub_context, "Actions file (default: shipped atomic + context)")
      ->check(CLI::ExistingFile);
  auto* sub_study = sub->add_subcommand("study", "Fit, score and plot in one run");
  sub_study->add_option("--actions", sub_actions, "Atomic actions file")->check(CLI::ExistingFile);
  sub_study->add_option("--context", sub_context, "Context actions file")->check(CLI::ExistingFile);
  sub_study->add_option("--anchor", sub_anchor, "Actions oriented to the positive side")
      ->delimiter(',');
  sub_study->add_option("--dominance", dominance, "PC1/PC2 ratio reported as dominant");

  // afinn-check
  auto* afinn = app.add_subcommand("afinn-check", "Validate Dos/Don'ts against an AFINN lexicon");
  fs::path afinn_lexicon;
  std::optional<fs::path> afinn_dos, afinn_donts;
  bool drop_unrated = false;
  bool pooled = false;
  afinn->add_option("--lexicon", afinn_lexicon, "AFINN file, word<TAB>rating")
      ->required()
      ->check(CLI::ExistingFile);
  afinn->add_option("--dos", afinn_dos, "Dos list (default: shipped)")->check(CLI::ExistingFile);
  afinn->add_option("--donts", afinn_donts, "Don'ts list (default: shipped)")->check(CLI::ExistingFile);
  afinn->add_flag("--drop-unrated", drop_unrated, "Exclude words missing from the lexicon");
  afinn->add_flag("--pooled", pooled, "Pooled-variance t-test instead of Welch");

  // embed
  auto* embed = app.add_subcommand("embed", "Embedding utilities");
  embed->require_subcommand(1);
  auto* embed_cache = embed->add_subcommand("cache", "Embed a text list into an mcm-embeddings file");
  fs::path cache_texts;
  std::optional<fs::path> cache_output;
  bool cache_prompts = false;
  embed_cache->add_option("--texts", cache_texts, "Texts, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  embed_cache->add_option("--output", cache_output, "Output file (default: <out>/embeddings.jsonl)");
  embed_cache->add_flag("--prompts", cache_prompts,
                        "Treat lines as actions and cache every rendered question and answer");
  auto* embed_check = embed->add_subcommand("serve-check", "Check a server against the HTTP contract");
  std::vector<std::string> probe_texts = {"Should I smile?", "Yes, you should.", "No, you should not."};
  embed_check->add_option("--text", probe_texts, "Probe text (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*extract) {
      RunConfig cfg;
      cfg.association_path = extract_sets;
      const auto sets = resolve_association_sets(cfg);
      const auto vocab = read_word_list(extract_vocab);
      ExtractionOptions options;
      options.include_association_words = extract_include;
      auto source = open_source(g);
      const auto e = extract_verbs(vocab, *source, sets, extract_k, options);
      emit(g, io, "extraction." + g.format, g.format == "csv" ? ranked_csv(e) : ranked_json(e));
    } else if (*score) {
      const auto phrases = collect_actions(score_actions, score_file);
      if (phrases.empty()) throw Error(ErrorCode::kUsage, "score needs --action or --actions");
      auto source = open_source(g);
      const auto results = moral_bias_batch(actions_from_phrases(phrases), open_template(g), *source);
      emit(g, io, "scores." + g.format,
           g.format == "csv" ? bias_results_csv(results, g.threshold)
                             : bias_results_json(results, g.threshold));
    } else if (*corr) {
      if (!corr_vocab && !(corr_dos && corr_donts)) {
        err << "correlate: provide --vocab, or both --dos and --donts\n" << corr->help();
        return kExitUsage;
      }
      corr_cfg.template_path = g.template_path;
      corr_cfg.association_path = corr_sets;
      corr_cfg.vocabulary_path = corr_vocab;
      corr_cfg.dos_path = corr_dos;
      corr_cfg.donts_path = corr_donts;
      corr_cfg.out_dir = out_dir(g);
      corr_cfg.threshold = g.threshold;
      auto source = open_source(g);
      const auto study = run_correlation_study(corr_cfg, *source);
      out << (g.format == "csv" ? correlation_csv(study.rows)
                                : correlation_report_json(study.report));
    } else if (*sub) {
      auto source = open_source(g);
      const auto tmpl = open_template(g);
      const auto default_scored = [&] {
        if (sub_context) return read_word_list(*sub_context);
        auto list = read_word_list(data_dir() / "atomic_actions.txt");
        for (auto& c : read_word_list(data_dir() / "context_actions.txt")) {
          if (std::find(list.begin(), list.end(), c) == list.end()) list.push_back(std::move(c));
        }
        return list;
      };
      if (*sub_fit) {
        const auto atomic = read_word_list(sub_actions.value_or(data_dir() / "atomic_actions.txt"));
        const auto anchors = actions_from_phrases(sub_anchor);
        std::vector<std::string> warnings;
        const auto fitted =
            fit_subspace(actions_from_phrases(atomic), tmpl, *source, anchors, &warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";
        const auto dir = out_dir(g);
        fs::create_directories(dir);
        write_file_atomic(dir / "subspace.json", subspace_to_json(fitted));
        std::vector<CsvRow> rows;
        for (std::size_t i = 0; i < fitted.variance_ratios.size(); ++i) {
          rows.push_back({std::to_string(i + 1), format_double(fitted.variance_ratios[i])});
        }
        write_file_atomic(dir / "variance.csv", to_csv({"component", "variance_ratio"}, rows));
        write_file_atomic(dir / "variance.svg", bar_svg(fitted.variance_ratios, "Explained variance ratio"));
        out << subspace_summary(fitted, dominance);
        out << "wrote " << (dir / "subspace.json").string() << "\n";
      } else if (*sub_score || *sub_plot) {
        const auto fitted = load_subspace(sub_file.value_or(out_dir(g) / "subspace.json"));
        if (fitted.dim() != source->dim()) {
          throw Error(ErrorCode::kDimensionMismatch, "subspace and source dimensions differ");
        }
        if (*sub_score) {
          auto phrases = collect_actions(sub_inline, sub_context);
          if (phrases.empty()) phrases = default_scored();
          auto scores = moral_scores(actions_from_phrases(phrases), fitted, tmpl, *source);
          sort_by_score(scores);
          emit(g, io, "moral_scores." + g.format,
               g.format == "csv" ? moral_scores_csv(scores) : scores_json(scores));
        } else {
          const auto phrases = default_scored();
          const auto proj = project_2d(actions_from_phrases(phrases), fitted, tmpl, *source);
          std::vector<CsvRow> rows;
          std::vector<ScatterPoint> points;
          for (const auto& p : proj) {
            rows.push_back({p.action.phrase(), format_double(p.x), format_double(p.y)});
            points.push_back({p.x, p.y, p.action.phrase(), 0});
          }
          ScatterOptions opts;
          opts.title = "Actions projected on the moral subspace";
          opts.x_label = "moral direction m (PC1)";
          opts.y_label = "PC2";
          opts.label_points = true;
          const auto dir = out_dir(g);
          fs::create_directories(dir);
          write_file_atomic(dir / "projection.csv", to_csv({"action", "x", "y"}, rows));
          write_file_atomic(dir / "projection.svg", scatter_svg(points, opts));
          out << "wrote " << (dir / "projection.svg").string() << "\n";
        }
      } else if (*sub_study) {
        RunConfig cfg;
        cfg.template_path = g.template_path;
        cfg.atomic_actions_path = sub_actions;
        cfg.context_actions_path = sub_context;
        cfg.anchors = sub_anchor;
        cfg.out_dir = out_dir(g);
        cfg.dominance_threshold = dominance;
        const auto study = run_subspace_study(cfg, *source);
        for (const auto& w : study.warnings) err << "warning: " << w << "\n";
        out << subspace_summary(study.subspace, dominance);
        for (const auto& p : study.written) out << "wrote " << p.string() << "\n";
      }
    } else if (*afinn) {
      const auto lexicon = load_afinn(afinn_lexicon);
      const auto dos = read_word_list(afinn_dos.value_or(data_dir() / "dos.txt"));
      const auto donts = read_word_list(afinn_donts.value_or(data_dir() / "donts.txt"));
      const auto v = afinn_validate(dos, donts, lexicon, drop_unrated, pooled);
      if (g.format == "csv") {
        const auto& t = v.test;
        emit(g, io, "afinn.csv",
             to_csv({"group", "mean", "std", "n", "rated"},
                    {{"Dos", format_double(t.mean_x), format_double(t.std_x), std::to_string(t.n_x),
                      std::to_string(v.rated_dos)},
                     {"Donts", format_double(t.mean_y), format_double(t.std_y),
                      std::to_string(t.n_y), std::to_string(v.rated_donts)}}));
      } else {
        auto j = nlohmann::ordered_json::parse(ttest_report_json(v.test));
        j["rated_dos"] = v.rated_dos;
        j["rated_donts"] = v.rated_donts;
        j["drop_unrated"] = drop_unrated;
        emit(g, io, "afinn.json", j.dump(2) + "\n");
      }
    } else if (*embed) {
      auto source = open_source(g);
      if (*embed_cache) {
        std::vector<std::string> texts;
        const auto lines = read_word_list(cache_texts);
        if (cache_prompts) {
          const auto tmpl = open_template(g);
          for (const auto& a : actions_from_phrases(lines)) {
            for (const auto& r : render_prompts(tmpl, a)) {
              for (const auto* t : {&r.question, &r.yes, &r.no}) {
                if (std::find(texts.begin(), texts.end(), *t) == texts.end()) texts.push_back(*t);
              }
            }
          }
        } else {
          texts = lines;
        }
        const auto vectors = embed_batch(*source, texts);
        EmbeddingStore store(source->dim());
        for (std::size_t i = 0; i < texts.size(); ++i) store.insert(texts[i], vectors[i]);
        const auto path = cache_output.value_or(out_dir(g) / "embeddings.jsonl");
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        write_file_atomic(path, format_embedding_file(store, source->name()));
        out << "wrote " << texts.size() << " embeddings (dim " << store.dim() << ") to "
            << path.string() << "\n";
      } else if (*embed_check) {
        const auto vectors = embed_batch(*source, probe_texts);
        out << "ok: " << vectors.size() << " vectors of dim " << source->dim() << " from "
            << source->name() << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace mcm::cli
