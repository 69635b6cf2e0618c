// Copyright 2026 The hltruth Authors.
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

#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hltruth/annotate.hpp"
#include "hltruth/corpus.hpp"
#include "hltruth/entailment.hpp"
#include "hltruth/error.hpp"
#include "hltruth/heuristics.hpp"
#include "hltruth/metrics.hpp"
#include "hltruth/pipeline.hpp"
#include "hltruth/remote_scorer.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"

namespace hltruth::cli {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kEndpointEnv = "HLTRUTH_SCORER_ENDPOINT";

struct TokenizerOpts {
  std::string mode = "unicode_word";
  bool lowercase = true;
  bool mask_digits = false;
  std::string stopwords = "english";

  void add_to(CLI::App* app) {
    app->add_option("--tokenizer", mode, "Tokenizer mode")
        ->check(CLI::IsMember({"unicode_word", "whitespace", "character"}))
        ->capture_default_str();
    app->add_option("--lowercase", lowercase, "Lowercase tokens (true/false)")
        ->capture_default_str();
    app->add_flag("--mask-digits", mask_digits, "Replace digits with '#'");
    app->add_option("--stopwords", stopwords,
                    "Stopword list: english, japanese, none, or a file path")
        ->capture_default_str();
  }

  TokenizerConfig config() const {
    return {parse_tokenizer_mode(mode), lowercase, mask_digits};
  }

  StopwordList stopword_list() const {
    if (stopwords == "english") return StopwordList::english();
    if (stopwords == "japanese") return StopwordList::japanese();
    if (stopwords == "none") return StopwordList();
    return StopwordList::load(stopwords);
  }
};

struct InputOpts {
  std::string format = "auto";
  std::string split = "train";
  bool lenient = false;

  void add_to(CLI::App* app) {
    app->add_option("--format", format, "Input format: auto, jsonl, tsv")
        ->check(CLI::IsMember({"auto", "jsonl", "tsv"}))
        ->capture_default_str();
    app->add_option("--split", split,
                    "Split for TSV rows and JSONL rows without one")
        ->check(CLI::IsMember({"train", "dev", "test"}))
        ->capture_default_str();
    app->add_flag("--lenient", lenient, "Skip malformed lines");
  }

  Dataset read(const std::string& path, std::ostream& err) const {
    const Format f =
        format == "auto" ? format_from_path(path) : parse_format(format);
    ReadOptions opts;
    opts.default_split = parse_split(split);
    opts.lenient = lenient;
    ReadResult r = read_instances(path, f, opts);
    for (const auto& e : r.errors)
      err << path << ":" << e.line << ": skipped: " << e.message << '\n';
    return std::move(r.dataset);
  }
};

struct ScorerOpts {
  std::string kind = "lexical";
  std::string model;
  std::string endpoint;
  int timeout_ms = 30000;
  unsigned max_in_flight = 4;
  std::size_t batch_size = 16;
  double threshold = 0.5;
  std::string on_error = "retry_n_then_fail";
  int retries = 3;

  void add_to(CLI::App* app, bool optional_scorer) {
    auto* k = app->add_option("--scorer", kind, "Scorer backing: lexical or remote")
                  ->check(CLI::IsMember({"lexical", "remote"}));
    if (!optional_scorer) k->capture_default_str();
    app->add_option("--model", model, "Lexical model JSON");
    app->add_option("--endpoint", endpoint, "Remote scorer base URL")
        ->envname(kEndpointEnv);
    app->add_option("--timeout-ms", timeout_ms, "Remote request timeout")
        ->capture_default_str();
    app->add_option("--max-in-flight", max_in_flight,
                    "Concurrent remote requests")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--batch-size", batch_size,
                    "Items per /v1/score_batch request (0/1: per-item calls)")
        ->capture_default_str();
    app->add_option("--threshold", threshold, "Entail iff prob >= threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--on-error", on_error,
                    "Remote failure policy: fail_run, skip_and_log, "
                    "retry_n_then_fail")
        ->check(CLI::IsMember({"fail_run", "skip_and_log", "retry_n_then_fail"}))
        ->capture_default_str();
    app->add_option("--retries", retries, "Retries for retry_n_then_fail")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }

  FailurePolicy policy() const {
    return {parse_failure_mode(on_error), retries};
  }

  ScorerBinding binding() const {
    ScorerBinding b;
    b.kind = parse_scorer_kind(kind);
    b.threshold = threshold;
    if (b.kind == ScorerKind::kLexical) {
      if (model.empty()) throw DataError("--scorer lexical needs --model");
      b.model = LexicalModel::load(model);
    } else {
      if (endpoint.empty()) {
        throw DataError(std::string("--scorer remote needs --endpoint or ") +
                        kEndpointEnv);
      }
      RemoteConfig rc;
      rc.endpoint = endpoint;
      rc.timeout_ms = timeout_ms;
      rc.max_in_flight = max_in_flight;
      rc.batch_size = batch_size;
      rc.retries = policy().effective_retries();
      b.remote = rc;
    }
    b.validate();
    return b;
  }
};

void write_dataset(const Dataset& d, const std::string& path) {
  write_instances(d, path, format_from_path(path));
}

std::string json_line(const ordered_json& j) { return j.dump() + "\n"; }

ordered_json filter_summary(const FilterReport& r) {
  ordered_json j;
  j["stage"] = r.stage;
  j["input_count"] = r.input_count;
  j["kept_count"] = r.kept_count;
  j["removed_count"] = r.removed_count;
  j["kept_ratio"] = round_to(r.kept_ratio, 4);
  return j;
}

std::string toml_string(std::string_view v) {
  std::string out = "\"";
  for (char c : v) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

// Values actually in effect: given on the command line, in the config file,
// from the environment, or defaulted.
void append_options(const CLI::App& app, std::string& out) {
  for (const CLI::Option* opt : app.get_options()) {
    const std::string& name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" ||
        name == "version" || !opt->get_configurable()) {
      continue;
    }
    std::vector<std::string> values;
    if (opt->count() > 0) {
      values = opt->reduced_results();
    } else if (!opt->get_default_str().empty()) {
      values = {opt->get_default_str()};
    } else {
      continue;
    }
    out += name + "=";
    if (opt->get_type_size_max() == 0) {
      out += values.empty() ? "true" : values.front();
    } else if (opt->get_expected_max() > 1) {
      out += "[";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += toml_string(values[i]);
      }
      out += "]";
    } else {
      out += toml_string(values.empty() ? "" : values.front());
    }
    out += '\n';
  }
}

std::string resolved_config(const CLI::App& app, const CLI::App& sub) {
  std::string out = std::string("# hltruth ") + HLTRUTH_VERSION +
                    " resolved configuration; rerun with --config <this file> " +
                    sub.get_name() + "\n";
  append_options(app, out);
  out += "\n[" + sub.get_name() + "]\n";
  append_options(sub, out);
  return out;
}

// Splits on whitespace; no shell quoting.
std::vector<std::string> split_command(const std::string& cmd) {
  std::istringstream in(cmd);
  std::vector<std::string> argv;
  std::string part;
  while (in >> part) argv.push_back(part);
  return argv;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Truthfulness curation and evaluation for headline generation",
               "hltruth"};
  app.set_config("--config", "", "key=value config file; flags override it");
  app.set_version_flag(
      "--version",
      std::string("hltruth ") + HLTRUTH_VERSION + " (data format " +
          std::to_string(HLTRUTH_FORMAT_VERSION) + ", wire protocol v1)");
  unsigned workers = default_workers();
  app.add_option("--workers", workers, "Worker threads (1 = sequential)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.require_subcommand(1);

  // stats -------------------------------------------------------------------
  struct {
    std::string in, out;
    TokenizerOpts tok;
    InputOpts input;
  } stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("--in", stats.in, "Instances file")->required();
  stats_cmd->add_option("--out", stats.out, "Write JSON here (default stdout)");
  stats.tok.add_to(stats_cmd);
  stats.input.add_to(stats_cmd);

  // noise-filter ------------------------------------------------------------
  struct {
    std::string in, out_kept, out_removed, report, markers;
    bool no_overlap = false, no_byline = false, no_punct = false;
    TokenizerOpts tok;
    InputOpts input;
  } noise;
  auto* noise_cmd =
      app.add_subcommand("noise-filter", "Apply the noise heuristics");
  noise_cmd->add_option("--in", noise.in, "Instances file")->required();
  noise_cmd->add_option("--out-kept", noise.out_kept)->required();
  noise_cmd->add_option("--out-removed", noise.out_removed)->required();
  noise_cmd->add_option("--report", noise.report, "FilterReport JSON")
      ->required();
  noise_cmd->add_option("--markers", noise.markers, "Marker pattern file");
  noise_cmd->add_flag("--no-overlap-check", noise.no_overlap);
  noise_cmd->add_flag("--no-byline-check", noise.no_byline);
  noise_cmd->add_flag("--no-punct-check", noise.no_punct);
  noise.tok.add_to(noise_cmd);
  noise.input.add_to(noise_cmd);

  // annotate ----------------------------------------------------------------
  struct {
    std::string in, annotator, log;
    std::optional<std::uint64_t> seed;
    InputOpts input;
  } annot;
  auto* annot_cmd =
      app.add_subcommand("annotate", "Interactive entailment labeling");
  annot_cmd->add_option("--in", annot.in, "Instances file")->required();
  annot_cmd->add_option("--annotator", annot.annotator)->required();
  annot_cmd->add_option("--log", annot.log, "Append-only annotation log")
      ->required();
  annot_cmd->add_option("--shuffle-seed", annot.seed);
  annot.input.add_to(annot_cmd);

  // aggregate ---------------------------------------------------------------
  struct {
    std::vector<std::string> in;
    std::string rule = "2of3", out;
  } agg;
  auto* agg_cmd = app.add_subcommand("aggregate", "Majority-vote annotations");
  agg_cmd->add_option("--in", agg.in, "annotations.jsonl file(s)")
      ->required()
      ->expected(1, -1);
  agg_cmd->add_option("--rule", agg.rule, "Majority rule, e.g. 2of3, 4of5")
      ->capture_default_str();
  agg_cmd->add_option("--out", agg.out, "aggregated.jsonl");

  // train-scorer ------------------------------------------------------------
  struct {
    std::string in, labels, model_out;
    int epochs = 200;
    double lr = 0.5;
    std::uint64_t seed = 13;
    std::size_t batch = 32;
    double holdout = 0.0;
    TokenizerOpts tok;
    InputOpts input;
  } train;
  auto* train_cmd =
      app.add_subcommand("train-scorer", "Train the lexical entailment model");
  train_cmd->add_option("--in", train.in, "Instances file")->required();
  train_cmd->add_option("--labels", train.labels, "aggregated.jsonl")
      ->required();
  train_cmd->add_option("--model-out", train.model_out)->required();
  train_cmd->add_option("--epochs", train.epochs)->capture_default_str();
  train_cmd->add_option("--learning-rate", train.lr)->capture_default_str();
  train_cmd->add_option("--seed", train.seed)->capture_default_str();
  train_cmd->add_option("--train-batch-size", train.batch)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--holdout", train.holdout,
                        "Fraction held out for evaluation")
      ->check(CLI::Range(0.0, 0.9))
      ->capture_default_str();
  train.tok.add_to(train_cmd);
  train.input.add_to(train_cmd);

  // score -------------------------------------------------------------------
  struct {
    std::string in, out;
    ScorerOpts scorer;
    TokenizerOpts tok;
    InputOpts input;
  } score;
  auto* score_cmd = app.add_subcommand("score", "Score instances");
  score_cmd->add_option("--in", score.in, "Instances file")->required();
  score_cmd->add_option("--out", score.out, "Scores JSONL")->required();
  score.scorer.add_to(score_cmd, false);
  score.tok.add_to(score_cmd);
  score.input.add_to(score_cmd);

  // filter ------------------------------------------------------------------
  struct {
    std::string in, out_kept, out_removed, report;
    bool allow_test = false;
    ScorerOpts scorer;
    TokenizerOpts tok;
    InputOpts input;
  } filt;
  auto* filter_cmd =
      app.add_subcommand("filter", "Remove non-entailed instances");
  filter_cmd->add_option("--in", filt.in, "Instances file")->required();
  filter_cmd->add_option("--out-kept", filt.out_kept)->required();
  filter_cmd->add_option("--out-removed", filt.out_removed)->required();
  filter_cmd->add_option("--report", filt.report, "FilterReport JSON")
      ->required();
  filter_cmd->add_flag("--allow-test", filt.allow_test,
                       "Permit filtering test-split instances");
  filt.scorer.add_to(filter_cmd, false);
  filt.tok.add_to(filter_cmd);
  filt.input.add_to(filter_cmd);

  // pseudo ------------------------------------------------------------------
  struct {
    std::string in, out, generator = "lead_truncate", command;
    std::size_t k = 8;
    bool include_dev = false;
    InputOpts input;
  } pseudo;
  auto* pseudo_cmd =
      app.add_subcommand("pseudo", "Generate pseudo pairs for removed sources");
  pseudo_cmd->add_option("--in", pseudo.in, "Removed instances")->required();
  pseudo_cmd->add_option("--out", pseudo.out, "Pseudo pairs")->required();
  pseudo_cmd->add_option("--generator", pseudo.generator)
      ->check(CLI::IsMember({"lead_truncate", "external"}))
      ->capture_default_str();
  pseudo_cmd->add_option("--k", pseudo.k, "Tokens kept by lead_truncate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pseudo_cmd->add_option("--command", pseudo.command,
                         "External generator command (whitespace-split)");
  pseudo_cmd->add_flag("--include-dev", pseudo.include_dev);
  pseudo.input.add_to(pseudo_cmd);

  // assemble ----------------------------------------------------------------
  struct {
    std::string kept, pseudo, mode = "filtered_plus_pseudo", out;
    InputOpts input;
  } assemble;
  auto* assemble_cmd =
      app.add_subcommand("assemble", "Build the training set");
  assemble_cmd->add_option("--kept", assemble.kept)->required();
  assemble_cmd->add_option("--pseudo", assemble.pseudo);
  assemble_cmd->add_option("--mode", assemble.mode)
      ->check(CLI::IsMember({"filtered", "filtered_plus_pseudo"}))
      ->capture_default_str();
  assemble_cmd->add_option("--out", assemble.out)->required();
  assemble.input.add_to(assemble_cmd);

  // evaluate ----------------------------------------------------------------
  struct {
    std::string outputs, refs, report, table, scatter;
    std::size_t min_chars = 10;
    double bin_width = 10;
    ScorerOpts scorer;
    TokenizerOpts tok;
    InputOpts input;
  } eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "ROUGE, support, entail");
  eval_cmd->add_option("--outputs", eval.outputs, "System JSONL {id,headline}")
      ->required();
  eval_cmd->add_option("--refs", eval.refs, "Reference instances")->required();
  eval_cmd->add_option("--report", eval.report, "EvalReport JSON")->required();
  eval_cmd->add_option("--table", eval.table, "Human-readable table");
  eval_cmd->add_option("--scatter", eval.scatter, "Per-instance TSV");
  eval_cmd->add_option("--min-source-chars", eval.min_chars)
      ->capture_default_str();
  eval_cmd->add_option("--bin-width", eval.bin_width)->capture_default_str();
  eval.scorer.add_to(eval_cmd, true);
  eval.tok.add_to(eval_cmd);
  eval.input.add_to(eval_cmd);

  // correlate ---------------------------------------------------------------
  struct {
    std::string outputs, refs, scatter;
    std::size_t min_chars = 10;
    TokenizerOpts tok;
    InputOpts input;
  } corr;
  auto* corr_cmd =
      app.add_subcommand("correlate", "Pearson r of ROUGE-1 vs support");
  corr_cmd->add_option("--outputs", corr.outputs)->required();
  corr_cmd->add_option("--refs", corr.refs)->required();
  corr_cmd->add_option("--scatter", corr.scatter, "id/rouge1/support TSV");
  corr_cmd->add_option("--min-source-chars", corr.min_chars)
      ->capture_default_str();
  corr.tok.add_to(corr_cmd);
  corr.input.add_to(corr_cmd);

  // histogram ---------------------------------------------------------------
  struct {
    std::string in, outputs, tsv;
    double bin_width = 10;
    std::size_t min_chars = 10;
    TokenizerOpts tok;
    InputOpts input;
  } hist;
  auto* hist_cmd = app.add_subcommand(
      "histogram", "Support-score histogram of instances or system outputs");
  hist_cmd->add_option("--in", hist.in, "Instances (sources + headlines)")
      ->required();
  hist_cmd->add_option("--outputs", hist.outputs,
                       "Score these generated headlines instead");
  hist_cmd->add_option("--bin-width", hist.bin_width)->capture_default_str();
  hist_cmd->add_option("--min-source-chars", hist.min_chars)
      ->capture_default_str();
  hist_cmd->add_option("--tsv", hist.tsv, "bin_lower/bin_upper/count TSV");
  hist.tok.add_to(hist_cmd);
  hist.input.add_to(hist_cmd);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hltruth: " << e.what() << '\n';
    err << "run 'hltruth --help' for usage\n";
    return kExitUsage;
  }

  // Everything that shaped this run, written beside the primary output.
  const std::string resolved = resolved_config(app, *app.get_subcommands().front());
  auto save_config = [&](const std::string& primary) {
    if (!primary.empty()) write_file(primary + ".run.toml", resolved);
  };

  try {
    if (stats_cmd->parsed()) {
      const Dataset d = stats.input.read(stats.in, err);
      const CorpusStats st = corpus_stats(d, stats.tok.config(), SentenceSplitter());
      ordered_json j;
      j["n_docs"] = st.n_docs;
      j["n_headline_words"] = st.n_headline_words;
      j["n_source_words"] = st.n_source_words;
      j["sents_per_doc"] = round_to(st.sents_per_doc, 2);
      j["words_per_doc"] = round_to(st.words_per_doc, 2);
      j["words_per_headline"] = round_to(st.words_per_headline, 2);
      if (stats.out.empty()) {
        out << j.dump(2) << '\n';
      } else {
        write_file(stats.out, j.dump(2) + "\n");
        save_config(stats.out);
      }
    } else if (noise_cmd->parsed()) {
      const Dataset d = noise.input.read(noise.in, err);
      NoiseFilterConfig cfg;
      cfg.content_overlap = !noise.no_overlap;
      cfg.byline_marks = !noise.no_byline;
      cfg.question_or_colon = !noise.no_punct;
      cfg.tokenizer = noise.tok.config();
      cfg.stopwords = noise.tok.stopword_list();
      if (!noise.markers.empty()) cfg.markers = MarkerSet::load(noise.markers);
      const FilterResult r = run_noise_filter(d, cfg, workers);
      write_dataset(r.kept, noise.out_kept);
      write_dataset(r.removed, noise.out_removed);
      write_file(noise.report, r.report.to_json());
      save_config(noise.report);
      out << json_line(filter_summary(r.report));
    } else if (annot_cmd->parsed()) {
      const Dataset d = annot.input.read(annot.in, err);
      AnnotationSession session(d, annot.annotator, annot.log, annot.seed);
      session.run(in, out);
      err << "annotate: " << session.records().size() << " labeled, "
          << session.remaining() << " remaining\n";
    } else if (agg_cmd->parsed()) {
      const MajorityRule rule = MajorityRule::parse(agg.rule);
      std::vector<AnnotationRecord> records;
      for (const auto& path : agg.in) {
        auto part = read_annotations(path);
        records.insert(records.end(), part.begin(), part.end());
      }
      const auto labels = aggregate_votes(records, rule);
      if (!agg.out.empty()) {
        write_file(agg.out, serialize_aggregated(labels));
        save_config(agg.out);
      }
      const EntailRatio ratio = entail_ratio(labels);
      const AgreementReport ag = agreement(records);
      ordered_json j;
      j["rule"] = rule.to_string();
      j["instances"] = labels.size();
      j["entail"] = ratio.entail;
      j["non_entail"] = ratio.non_entail;
      j["undecided"] = ratio.undecided;
      j["entail_ratio"] = round_to(ratio.ratio_all, 4);
      j["entail_ratio_decided"] = round_to(ratio.ratio_decided, 4);
      j["raw_agreement"] = round_to(ag.raw_agreement, 4);
      out << json_line(j);
    } else if (train_cmd->parsed()) {
      const Dataset d = train.input.read(train.in, err);
      const auto labels = parse_aggregated(read_file(train.labels));
      std::map<std::string, AggregateLabel> by_id;
      for (const auto& l : labels) by_id[l.instance_id] = l.label;
      std::vector<LabeledInstance> labeled;
      for (const auto& inst : d) {
        auto it = by_id.find(inst.id);
        if (it == by_id.end() || it->second == AggregateLabel::kUndecided)
          continue;
        labeled.push_back({inst, it->second == AggregateLabel::kEntail
                                     ? EntailmentLabel::kEntail
                                     : EntailmentLabel::kNonEntail});
      }
      std::vector<LabeledInstance> held;
      if (train.holdout > 0.0) {
        seeded_shuffle(labeled, train.seed);
        const auto n_held = static_cast<std::size_t>(
            std::llround(train.holdout * labeled.size()));
        held.assign(labeled.end() - n_held, labeled.end());
        labeled.resize(labeled.size() - n_held);
      }
      TrainHyper hyper;
      hyper.epochs = train.epochs;
      hyper.learning_rate = train.lr;
      hyper.seed = train.seed;
      hyper.batch_size = train.batch;
      const StopwordList sw = train.tok.stopword_list();
      const LexicalModel model =
          train_lexical(labeled, hyper, train.tok.config(), sw);
      model.save(train.model_out);
      save_config(train.model_out);
      const LexicalScorer scorer(model, sw);
      auto cm_json = [&](const ConfusionMatrix& cm) {
        ordered_json c;
        c["n"] = cm.total();
        c["accuracy"] = round_to(cm.accuracy(), 4);
        c["precision"] = round_to(cm.precision(), 4);
        c["recall"] = round_to(cm.recall(), 4);
        c["true_entail"] = cm.true_entail;
        c["false_entail"] = cm.false_entail;
        c["true_non_entail"] = cm.true_non_entail;
        c["false_non_entail"] = cm.false_non_entail;
        return c;
      };
      ordered_json j;
      j["train"] = cm_json(evaluate_classifier(scorer, labeled, 0.5, workers));
      if (!held.empty())
        j["holdout"] = cm_json(evaluate_classifier(scorer, held, 0.5, workers));
      j["epochs_run"] = model.training_meta.epoch_losses.size();
      j["final_loss"] = model.training_meta.epoch_losses.empty()
                            ? ordered_json()
                            : ordered_json(model.training_meta.epoch_losses.back());
      out << json_line(j);
    } else if (score_cmd->parsed()) {
      const Dataset d = score.input.read(score.in, err);
      const ScorerBinding binding = score.scorer.binding();
      const auto scorer = make_scorer(binding, score.tok.stopword_list());
      std::vector<ScoreItem> items;
      for (const auto& inst : d)
        items.push_back({inst.id, inst.source, inst.headline});
      const auto outcomes = scorer->score_batch(items, workers);
      std::string body;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (outcomes[i].error) std::rethrow_exception(outcomes[i].error);
        const double p = outcomes[i].score->entail_prob;
        ordered_json j;
        j["id"] = d[i].id;
        j["entail_prob"] = p;
        j["label"] = to_string(classify(p, binding.threshold));
        body += json_line(j);
      }
      write_file(score.out, body);
      save_config(score.out);
    } else if (filter_cmd->parsed()) {
      const Dataset d = filt.input.read(filt.in, err);
      const auto scorer =
          make_scorer(filt.scorer.binding(), filt.tok.stopword_list());
      EntailmentFilterOptions opts;
      opts.threshold = filt.scorer.threshold;
      opts.policy = filt.scorer.policy();
      opts.allow_test_split = filt.allow_test;
      opts.workers = workers;
      const FilterResult r = filter_entailment(d, *scorer, opts);
      for (const auto& id : r.report.skipped_ids)
        err << "filter: skipped '" << id << "' after scorer failure\n";
      write_dataset(r.kept, filt.out_kept);
      write_dataset(r.removed, filt.out_removed);
      write_file(filt.report, r.report.to_json());
      save_config(filt.report);
      out << json_line(filter_summary(r.report));
    } else if (pseudo_cmd->parsed()) {
      const Dataset removed = pseudo.input.read(pseudo.in, err);
      PseudoGenerator gen = LeadTruncate{pseudo.k};
      if (pseudo.generator == "external") {
        auto argv = split_command(pseudo.command);
        if (argv.empty())
          throw DataError("--generator external needs --command");
        gen = ExternalCommand{std::move(argv)};
      }
      PseudoOptions opts;
      opts.include_dev = pseudo.include_dev;
      const Dataset pairs = generate_pseudo(removed, gen, opts);
      write_dataset(pairs, pseudo.out);
      save_config(pseudo.out);
      ordered_json j;
      j["removed"] = removed.size();
      j["pseudo"] = pairs.size();
      j["generator"] = generator_id(gen);
      out << json_line(j);
    } else if (assemble_cmd->parsed()) {
      const Dataset kept = assemble.input.read(assemble.kept, err);
      Dataset pseudo_pairs;
      const AssembleMode mode = parse_assemble_mode(assemble.mode);
      if (mode == AssembleMode::kFilteredPlusPseudo) {
        if (assemble.pseudo.empty())
          throw DataError("--mode filtered_plus_pseudo needs --pseudo");
        pseudo_pairs = assemble.input.read(assemble.pseudo, err);
      }
      const Dataset d = assemble_training_set(kept, pseudo_pairs, mode);
      write_dataset(d, assemble.out);
      save_config(assemble.out);
      ordered_json j;
      j["mode"] = to_string(mode);
      j["kept"] = kept.size();
      j["pseudo"] = pseudo_pairs.size();
      j["total"] = d.size();
      out << json_line(j);
    } else if (eval_cmd->parsed()) {
      const auto outputs = read_generated(eval.outputs);
      const Dataset refs = eval.input.read(eval.refs, err);
      EvalOptions opts;
      opts.tokenizer = eval.tok.config();
      opts.min_source_chars = eval.min_chars;
      opts.bin_width = eval.bin_width;
      opts.workers = workers;
      opts.threshold = eval.scorer.threshold;
      std::unique_ptr<EntailmentScorer> scorer;
      if (eval_cmd->count("--scorer") > 0) {
        scorer = make_scorer(eval.scorer.binding(), eval.tok.stopword_list());
        opts.scorer = scorer.get();
      }
      const EvalReport report = evaluate(outputs, refs, opts);
      write_file(eval.report, report.to_json());
      if (!eval.table.empty()) write_file(eval.table, report.to_table());
      if (!eval.scatter.empty()) {
        std::string tsv;
        for (const auto& row : report.rows) {
          tsv += row.id + '\t' + format_fixed(row.rouge1_f1, 4) + '\t' +
                 format_fixed(row.support, 4) + '\n';
        }
        write_file(eval.scatter, tsv);
      }
      save_config(eval.report);
      out << report.to_table();
    } else if (corr_cmd->parsed()) {
      const auto outputs = read_generated(corr.outputs);
      const Dataset refs = corr.input.read(corr.refs, err);
      EvalOptions opts;
      opts.tokenizer = corr.tok.config();
      opts.min_source_chars = corr.min_chars;
      opts.workers = workers;
      const EvalReport report = evaluate(outputs, refs, opts);
      const CorrelationReport c = correlation_report(report);
      if (!corr.scatter.empty()) {
        write_file(corr.scatter, c.scatter_tsv);
        save_config(corr.scatter);
      }
      ordered_json j;
      j["r"] = c.correlation.r;
      j["n"] = c.correlation.n;
      out << json_line(j);
    } else if (hist_cmd->parsed()) {
      const Dataset d = hist.input.read(hist.in, err);
      std::vector<GeneratedHeadline> outputs;
      if (!hist.outputs.empty()) {
        outputs = read_generated(hist.outputs);
      } else {
        for (const auto& inst : d) outputs.push_back({inst.id, inst.headline});
      }
      EvalOptions opts;
      opts.tokenizer = hist.tok.config();
      opts.min_source_chars = hist.min_chars;
      opts.bin_width = hist.bin_width;
      opts.workers = workers;
      const EvalReport report = evaluate(outputs, d, opts);
      std::vector<double> supports;
      for (const auto& row : report.rows) supports.push_back(row.support);
      const Histogram& h = report.support_histogram;
      if (!hist.tsv.empty()) {
        std::string tsv;
        for (std::size_t k = 0; k < h.bin_counts.size(); ++k) {
          tsv += format_fixed(h.bin_lower(k), 2) + '\t' +
                 format_fixed(h.bin_lower(k + 1), 2) + '\t' +
                 std::to_string(h.bin_counts[k]) + '\n';
        }
        write_file(hist.tsv, tsv);
        save_config(hist.tsv);
      }
      ordered_json j;
      j["n"] = h.total;
      j["n_excluded"] = report.n_excluded;
      j["bin_width"] = h.bin_width;
      j["counts"] = h.bin_counts;
      j["support_mean"] = round_to(report.support_mean, 2);
      j["fraction_above_80"] = round_to(fraction_above(supports, 80.0), 4);
      j["fraction_below_40"] = round_to(fraction_below(supports, 40.0), 4);
      out << json_line(j);
    }
  } catch (const RemoteError& e) {
    err << "hltruth: remote scorer failure: " << e.what() << '\n';
    return kExitRemote;
  } catch (const DataError& e) {
    err << "hltruth: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "hltruth: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace hltruth::cli
