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


// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any line fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hltruth/corpus.hpp"
#include "hltruth/entailment.hpp"
#include "hltruth/error.hpp"
#include "hltruth/heuristics.hpp"
#include "hltruth/metrics.hpp"
#include "hltruth/pipeline.hpp"
#include "hltruth/remote_scorer.hpp"
#include "hltruth/stub_scorer.hpp"
#include "hltruth/textkit.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace hltruth {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// A criterion fails by throwing; the message becomes the detail column.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

struct Criterion {
  std::string name;
  double limit_s = 0;  // 0: no runtime limit
  std::function<std::string()> body;
};

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() /
            ("hltruth_acceptance_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// Answers by exact headline, for pipeline checks that need no network.
class TableScorer : public EntailmentScorer {
 public:
  explicit TableScorer(std::map<std::string, double> by_headline)
      : by_headline_(std::move(by_headline)) {}
  EntailmentScore score(std::string_view, std::string_view headline) const override {
    return {by_headline_.at(std::string(headline))};
  }
  std::string describe() const override { return "table"; }

 private:
  std::map<std::string, double> by_headline_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string rouge_oracle() {
  std::mt19937_64 rng(20260101);
  std::size_t compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t alphabet = 2 + rng() % 7;  // 2..8
    const auto ref = testing::random_seq(rng, alphabet, 12);
    const auto cand = testing::random_seq(rng, alphabet, 12);
    const auto same = [&](const RougeScore& got, const testing::OracleScore& want,
                          const char* what) {
      expect(got.precision == want.precision && got.recall == want.recall &&
                 got.f1 == want.f1,
             std::string(what) + " differs on pair " + std::to_string(i));
      ++compared;
    };
    same(rouge_n(ref, cand, 1), testing::oracle_rouge_n(ref, cand, 1), "rouge-1");
    same(rouge_n(ref, cand, 2), testing::oracle_rouge_n(ref, cand, 2), "rouge-2");
    same(rouge_l(ref, cand), testing::oracle_rouge_l(ref, cand), "rouge-l");
  }
  return "1000 pairs, " + std::to_string(compared) + " scores bit-identical";
}

std::string support_identities() {
  std::mt19937_64 rng(77);
  int contained = 0, disjoint = 0;
  for (int i = 0; i < 1000; ++i) {
    auto source = testing::random_seq(rng, 2 + rng() % 7, 12);
    auto headline = testing::random_seq(rng, 2 + rng() % 7, 12);
    const SupportScore s = support_score(source, headline);
    expect(s.value == rouge_n(headline, source, 1).recall,
           "support != rouge_n(h, s, 1).recall on pair " + std::to_string(i));
    expect(s.degenerate == headline.empty(), "degenerate flag");

    // Headline drawn from distinct source positions: multiset containment,
    // so clipping never bites.
    if (!source.empty()) {
      std::vector<std::size_t> pos(source.size());
      for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = k;
      std::shuffle(pos.begin(), pos.end(), rng);
      pos.resize(1 + rng() % source.size());
      Tokens sub;
      for (std::size_t k : pos) sub.push_back(source[k]);
      expect(support_score(source, sub).value == 100.0,
             "containment did not give 100 on pair " + std::to_string(i));
      ++contained;
    }
    // Uppercase letters never occur in random_seq output.
    Tokens other = headline;
    for (auto& t : other) t = std::string(1, static_cast<char>(t[0] - 'a' + 'A'));
    if (!other.empty()) {
      expect(support_score(source, other).value == 0.0,
             "disjoint pair scored nonzero on pair " + std::to_string(i));
      ++disjoint;
    }
  }
  return "1000 identities, " + std::to_string(contained) + " containment, " +
         std::to_string(disjoint) + " disjoint";
}

char code(VoteLabel l) {
  switch (l) {
    case VoteLabel::kEntail: return 'e';
    case VoteLabel::kNonEntail: return 'n';
    case VoteLabel::kIncomprehensible: return 'i';
  }
  return '?';
}

std::string released_check() {
  const char* dir = std::getenv("HLTRUTH_RELEASED_ANNOTATIONS");
  if (!dir || !*dir) return "released annotations not provided, ratio check skipped";
  const std::vector<std::pair<std::string, double>> targets{
      {"gigaword_lead", 70.3}, {"gigaword_full", 92.8},
      {"jamul_lead", 61.4}, {"jamul_full", 94.2}};
  std::string detail = "released:";
  for (const auto& [name, want] : targets) {
    const auto labels = aggregate_votes(
        read_annotations(fs::path(dir) / (name + ".jsonl")), MajorityRule{2, 3});
    const double got = 100.0 * entail_ratio(labels).ratio_all;
    expect(std::abs(got - want) <= 0.1 + 1e-9,
           name + " ratio " + fmt("%.2f", got) + " vs " + fmt("%.1f", want));
    detail += " " + name + "=" + fmt("%.2f", got);
  }
  return detail;
}

std::string vote_truth_table() {
  const std::string dir = std::string(HLTRUTH_TEST_DATA_DIR) + "/votes";
  const auto records = read_annotations(dir + "/synthetic_votes.jsonl");

  std::map<std::string, std::vector<std::string>> want;  // id -> row
  std::ifstream table(dir + "/truth_table.tsv");
  expect(static_cast<bool>(table), "truth table missing");
  std::string line;
  while (std::getline(table, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    expect(cols.size() == 5, "bad truth table row: " + line);
    want[cols[0]] = cols;
  }

  std::size_t checked = 0;
  for (const auto& [rule_text, prefix, patterns] :
       {std::tuple{"2of3", "p3-", 10}, std::tuple{"4of5", "p5-", 21}}) {
    std::vector<AnnotationRecord> subset;
    std::map<std::string, std::string> pattern;
    for (const auto& r : records) {
      if (r.instance_id.rfind(prefix, 0) != 0) continue;
      subset.push_back(r);
      pattern[r.instance_id] += code(r.label);
    }
    std::set<std::string> distinct;
    for (auto [id, p] : pattern) {
      std::sort(p.begin(), p.end());
      distinct.insert(p);
    }
    expect(static_cast<int>(distinct.size()) == patterns,
           std::string(rule_text) + " fixture does not cover every vote pattern");

    const auto got = aggregate_votes(subset, MajorityRule::parse(rule_text));
    expect(got.size() == pattern.size(), "instance count");
    for (const auto& a : got) {
      const auto it = want.find(a.instance_id);
      expect(it != want.end(), a.instance_id + " absent from truth table");
      const auto& row = it->second;
      expect(row[1] == rule_text && row[2] == to_string(a.label) &&
                 row[3] == std::to_string(a.votes_for) &&
                 row[4] == std::to_string(a.votes_total),
             a.instance_id + " aggregated to " + std::string(to_string(a.label)) +
                 " " + std::to_string(a.votes_for) + "/" +
                 std::to_string(a.votes_total));
      ++checked;
    }
  }
  expect(checked == want.size(), "truth table rows left unchecked");
  return std::to_string(checked) + " instances exact; " + released_check();
}

std::string noise_heuristics() {
  const auto examples = read_instances(
      std::string(HLTRUTH_TEST_DATA_DIR) + "/table2_examples.jsonl", Format::kJsonl);
  const auto it = std::find_if(examples.dataset.begin(), examples.dataset.end(),
                               [](const Instance& i) { return i.id == "t2-4"; });
  expect(it != examples.dataset.end(), "example 4 missing");
  expect(it->headline == "Football : Italian Serie A table", "example 4 headline");
  expect(!check_punctuation(it->headline), "example 4 passes the punctuation check");

  const NoiseFilterConfig config;
  std::ifstream in(std::string(HLTRUTH_TEST_DATA_DIR) + "/heuristics/golden.jsonl");
  expect(static_cast<bool>(in), "golden suite missing");
  int cases = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    Instance inst;
    inst.id = j["case"];
    inst.source = j["source"];
    inst.headline = j["headline"];
    const auto v = apply_noise_filters(inst, config);
    std::set<std::string> names;
    for (auto x : v.violations) names.emplace(to_string(x));
    expect(v.keep == j["keep"].get<bool>() &&
               names == j["violations"].get<std::set<std::string>>(),
           "golden case " + inst.id);
    ++cases;
  }
  expect(cases == 20, "golden suite has " + std::to_string(cases) + " cases");
  return "example 4 rejected; 20/20 golden cases";
}

std::string filter_partition() {
  const auto corpus = testing::scripted_corpus(1000, 4242);
  StubScript script;
  script.by_id = corpus.decisions;
  StubScorerServer server(std::move(script));
  RemoteConfig rc;
  rc.endpoint = server.endpoint();
  rc.timeout_ms = 5000;
  rc.max_in_flight = 4;
  rc.batch_size = 16;
  RemoteScorer scorer(rc);
  EntailmentFilterOptions opts;
  opts.workers = 4;

  std::string first;
  for (int run = 0; run < 2; ++run) {
    const FilterResult r = filter_entailment(corpus.dataset, scorer, opts);
    Dataset all = r.kept;
    all.insert(all.end(), r.removed.begin(), r.removed.end());
    const auto by_id = [](const Instance& a, const Instance& b) { return a.id < b.id; };
    std::sort(all.begin(), all.end(), by_id);
    Dataset input = corpus.dataset;
    std::sort(input.begin(), input.end(), by_id);
    expect(all == input, "kept and removed do not partition the input");

    std::size_t want_kept = 0;
    for (const auto& [id, p] : corpus.decisions) want_kept += p >= 0.5;
    expect(r.kept.size() == want_kept && r.report.kept_count == want_kept &&
               r.report.removed_count == 1000 - want_kept,
           "kept " + std::to_string(r.kept.size()) + ", script says " +
               std::to_string(want_kept));
    for (const auto& i : r.kept)
      expect(corpus.decisions.at(i.id) >= 0.5, i.id + " kept below threshold");

    const std::string bytes = serialize_instances(r.kept, Format::kJsonl) + '\x1e' +
                              serialize_instances(r.removed, Format::kJsonl) +
                              '\x1e' + r.report.to_json();
    if (run == 0) {
      first = bytes;
    } else {
      expect(bytes == first, "second run differs");
    }
  }
  return "1000 instances, partition exact, runs byte-identical";
}

std::string self_training() {
  std::size_t cases = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto corpus = testing::scripted_corpus(200, seed);
    std::map<std::string, double> by_headline;
    for (const auto& i : corpus.dataset)
      by_headline[i.headline] = corpus.decisions.at(i.id);
    const TableScorer scorer(by_headline);
    EntailmentFilterOptions opts;
    opts.threshold = 0.1 + 0.04 * static_cast<double>(seed);
    const FilterResult r = filter_entailment(corpus.dataset, scorer, opts);

    const PseudoGenerator gen = LeadTruncate{1 + seed % 8};
    const Dataset pseudo = generate_pseudo(r.removed, gen);
    expect(pseudo.size() == r.removed.size(), "a removed source yielded no pair");
    const Dataset assembled =
        assemble_training_set(r.kept, pseudo, AssembleMode::kFilteredPlusPseudo);
    expect(assembled.size() == corpus.dataset.size(),
           "assembled " + std::to_string(assembled.size()) + " of " +
               std::to_string(corpus.dataset.size()));
    check_unique_ids(assembled);

    std::map<std::string, const Instance*> removed;
    for (const auto& i : r.removed) removed[i.id] = &i;
    for (const auto& p : pseudo) {
      expect(p.origin == Origin::kPseudo, p.id + " origin");
      const auto src = p.metadata.find(std::string(kSourceIdKey));
      expect(src != p.metadata.end() && removed.count(src->second) &&
                 p.id == src->second + std::string(kPseudoSuffix) &&
                 p.source == removed[src->second]->source,
             p.id + " source link");
      const auto g = p.metadata.find(std::string(kGeneratorKey));
      expect(g != p.metadata.end() && g->second == generator_id(gen),
             p.id + " generator field");
    }
    const auto round = parse_instances(serialize_instances(assembled, Format::kJsonl),
                                       Format::kJsonl);
    expect(round.errors.empty() && round.dataset == assembled,
           "provenance did not round-trip");
    ++cases;
  }
  return std::to_string(cases) + " corpora restored to full size, provenance round-trips";
}

std::string lexical_scorer() {
  const auto data = testing::separable_set(200, 11);
  const LexicalModel model =
      train_lexical(data, TrainHyper{}, TokenizerConfig{}, StopwordList::english());
  const LexicalScorer scorer(model, StopwordList::english());
  const ConfusionMatrix cm = evaluate_classifier(scorer, data, 0.5, 1);
  expect(cm.total() == 200, "confusion matrix size");
  expect(cm.accuracy() == 1.0, "training accuracy " + fmt("%.4f", cm.accuracy()));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> grid;
  for (int k = 1; k < 100; ++k) grid.push_back(k / 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng);
    bool was_entail = true;
    for (double t : grid) {
      const bool entail = classify(p, t) == EntailmentLabel::kEntail;
      expect(!entail || was_entail, "label flipped back to entail as threshold rose");
      was_entail = entail;
    }
  }
  return "200/200 correct, monotone over 1000 scores";
}

std::string pearson_check() {
  struct Fixed {
    std::vector<double> x, y;
    double r;
  };
  // Deviations are small integers, so each r is exact by hand.
  const std::vector<Fixed> fixed{
      {{1, 2, 3, 4, 5}, {3, 1, 2, 5, 4}, 0.6},
      {{1, 2, 3, 4, 5}, {10, 8, 6, 4, 2}, -1.0},
      {{2, 4, 6, 8}, {1, 3, 2, 4}, 0.8},
  };
  for (const auto& f : fixed) {
    const double r = pearson(f.x, f.y).r;
    expect(std::abs(r - f.r) <= 1e-12, "fixed vector gave " + fmt("%.17g", r));
  }

  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-50.0, 50.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(30), y(30);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng);
    const double a = (rng() % 2 ? 1 : -1) * scale(rng), b = shift(rng);
    const double c = (rng() % 2 ? 1 : -1) * scale(rng), d = shift(rng);
    std::vector<double> xs(x.size()), ys(y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      xs[k] = a * x[k] + b;
      ys[k] = c * y[k] + d;
    }
    const double want = (a * c > 0 ? 1 : -1) * pearson(x, y).r;
    const double diff = std::abs(pearson(xs, ys).r - want);
    worst = std::max(worst, diff);
    expect(diff <= 1e-9, "affine invariance off by " + fmt("%.3g", diff));
  }
  return "3 fixed within 1e-12, 100 affine max diff " + fmt("%.1e", worst);
}

int cli(const std::vector<std::string>& args) {
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  if (code != 0)
    throw Failure(args.front() + " exited " + std::to_string(code) + ": " + err.str());
  return code;
}

std::string end_to_end() {
  const fs::path data = fs::path(HLTRUTH_DATA_DIR) / "toy";
  const fs::path golden = fs::path(HLTRUTH_GOLDEN_DIR) / "e2e";
  StubScorerServer server(StubScript::load(data / "stub_decisions.jsonl"));
  const std::string ep = server.endpoint();
  TempDir tmp("e2e");
  const auto p = [&](const char* name) { return (tmp / name).string(); };

  cli({"noise-filter", "--in", (data / "train.jsonl").string(), "--out-kept",
       p("nf_kept.jsonl"), "--out-removed", p("nf_removed.jsonl"), "--report",
       p("nf_report.json")});
  cli({"filter", "--scorer", "remote", "--endpoint", ep, "--in", p("nf_kept.jsonl"),
       "--out-kept", p("kept.jsonl"), "--out-removed", p("removed.jsonl"),
       "--report", p("filter_report.json")});
  cli({"pseudo", "--in", p("removed.jsonl"), "--out", p("pseudo.jsonl")});
  cli({"assemble", "--kept", p("kept.jsonl"), "--pseudo", p("pseudo.jsonl"),
       "--out", p("train_set.jsonl")});
  cli({"evaluate", "--scorer", "remote", "--endpoint", ep, "--outputs",
       (data / "system_outputs.jsonl").string(), "--refs",
       (data / "test.jsonl").string(), "--report", p("eval_report.json"),
       "--table", p("eval_table.txt"), "--scatter", p("scatter.tsv")});

  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(golden)) {
    const std::string name = entry.path().filename().string();
    expect(fs::exists(tmp / name), name + " was not produced");
    expect(read_file(tmp / name) == read_file(entry.path()), name + " differs from golden");
    ++files;
  }
  expect(files >= 11, "golden directory incomplete");
  return std::to_string(files) + " files byte-identical";
}

std::string remote_contract() {
  std::vector<ScoreItem> items;
  for (int i = 0; i < 48; ++i) {
    const auto s = std::to_string(i);
    items.push_back({"c" + s, "premise " + s, "hypothesis " + s});
  }
  std::string seen;
  for (unsigned limit : {1u, 3u, 6u}) {
    for (std::size_t batch : {std::size_t{1}, std::size_t{4}}) {
      StubScript script;
      script.delay = std::chrono::milliseconds(15);
      StubScorerServer server(std::move(script));
      RemoteConfig rc;
      rc.endpoint = server.endpoint();
      rc.timeout_ms = 5000;
      rc.max_in_flight = limit;
      rc.batch_size = batch;
      const RemoteScorer scorer(rc);
      const auto out = scorer.score_batch(items, 8);
      for (const auto& o : out) expect(o.score.has_value(), "item failed");
      expect(server.max_in_flight() <= limit,
             "observed " + std::to_string(server.max_in_flight()) +
                 " concurrent requests with limit " + std::to_string(limit));
      seen += " " + std::to_string(server.max_in_flight()) + "/" + std::to_string(limit);
    }
  }

  StubScript bad;
  bad.by_id = {{"hi", 1.2}, {"lo", -0.1}};
  bad.by_hypothesis = {{"too high", 1.2}, {"too low", -0.1}};
  StubScorerServer server(std::move(bad));
  RemoteConfig rc;
  rc.endpoint = server.endpoint();
  rc.timeout_ms = 5000;
  rc.retries = 0;
  const RemoteScorer scorer(rc);
  for (const char* h : {"too high", "too low"}) {
    bool raised = false;
    try {
      scorer.score("premise", h);
    } catch (const ProtocolViolation&) {
      raised = true;
    }
    expect(raised, std::string("single call '") + h + "' did not raise");
  }
  const std::vector<ScoreItem> batch{{"hi", "p", "x"}, {"lo", "p", "y"}};
  for (const auto& o : scorer.score_batch(batch, 1)) {
    bool raised = false;
    try {
      if (o.error) std::rethrow_exception(o.error);
    } catch (const ProtocolViolation&) {
      raised = true;
    }
    expect(raised, "batch item out of range did not raise");
  }
  return "peak/limit" + seen + "; out-of-range raises";
}

}  // namespace
}  // namespace hltruth

int main() {
  using namespace hltruth;
  const std::vector<Criterion> criteria{
      {"rouge_oracle_equivalence", 10, rouge_oracle},
      {"support_score_identities", 0, support_identities},
      {"vote_aggregation", 0, vote_truth_table},
      {"noise_heuristics", 0, noise_heuristics},
      {"filter_partition_determinism", 5, filter_partition},
      {"self_training_cardinality", 0, self_training},
      {"lexical_scorer", 0, lexical_scorer},
      {"pearson", 0, pearson_check},
      {"end_to_end_golden", 10, end_to_end},
      {"remote_client_contract", 0, remote_contract},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
      detail = c.body();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.limit_s > 0 && secs >= c.limit_s) {
      ok = false;
      detail += "; over the " + fmt("%.0f", c.limit_s) + " s limit";
    }
    failed += !ok;
    std::printf("%s  %-30s %7.3f s  %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), secs,
                detail.c_str());
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
