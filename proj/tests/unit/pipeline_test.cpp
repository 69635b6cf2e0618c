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

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "hltruth/error.hpp"
#include "hltruth/pipeline.hpp"
#include "json.hpp"
#include "support/synthetic.hpp"

namespace hltruth {
namespace {

// Probabilities keyed by instance id through the premise text; ids listed
// in `failing` raise RemoteError.
class ScriptedScorer : public EntailmentScorer {
 public:
  ScriptedScorer(std::map<std::string, double> by_source,
                 std::set<std::string> failing = {})
      : by_source_(std::move(by_source)), failing_(std::move(failing)) {}

  EntailmentScore score(std::string_view source,
                        std::string_view) const override {
    const std::string key(source);
    if (failing_.count(key)) throw RemoteError("scripted outage");
    return {by_source_.at(key)};
  }
  std::string describe() const override { return "scripted"; }

 private:
  std::map<std::string, double> by_source_;
  std::set<std::string> failing_;
};

Instance make(std::string id, std::string source, std::string headline,
              Split split = Split::kTrain) {
  Instance i;
  i.id = std::move(id);
  i.source = std::move(source);
  i.headline = std::move(headline);
  i.split = split;
  return i;
}

std::set<std::string> ids(const Dataset& d) {
  std::set<std::string> out;
  for (const auto& i : d) out.insert(i.id);
  return out;
}

Dataset small_corpus() {
  return {make("a", "s-a", "h"), make("b", "s-b", "h"), make("c", "s-c", "h"),
          make("d", "s-d", "h", Split::kDev)};
}

const std::map<std::string, double> kProbs{
    {"s-a", 0.9}, {"s-b", 0.5}, {"s-c", 0.49}, {"s-d", 0.1}};

TEST_SUITE("pipeline") {
  TEST_CASE("noise filter partitions and counts reasons") {
    const Dataset d{make("1", "Lazio and Roma meet", "Lazio beat Roma"),
                    make("2", "Lazio and Roma meet", "Football : Serie A table"),
                    make("3", "Oil prices fell", "By staff: what now?"),
                    make("4", "Oil prices fell", "Oil prices fall")};
    const FilterResult r = run_noise_filter(d, NoiseFilterConfig{}, 3);
    CHECK(ids(r.kept) == std::set<std::string>{"1", "4"});
    CHECK(ids(r.removed) == std::set<std::string>{"2", "3"});
    CHECK(r.report.stage == "noise");
    CHECK(r.report.kept_ratio == 0.5);
    CHECK(r.report.per_reason.at("no_content_overlap") == 2);
    CHECK(r.report.per_reason.at("byline_marks") == 1);
    CHECK(r.report.per_reason.at("question_or_colon") == 2);
  }

  TEST_CASE("noise filter output does not depend on the worker count") {
    auto c = testing::scripted_corpus(300, 8);
    for (std::size_t i = 0; i < c.dataset.size(); i += 7)
      c.dataset[i].headline += "?";
    const auto one = run_noise_filter(c.dataset, NoiseFilterConfig{}, 1);
    const auto many = run_noise_filter(c.dataset, NoiseFilterConfig{}, 8);
    CHECK(one.kept == many.kept);
    CHECK(one.removed == many.removed);
    CHECK(one.report.to_json() == many.report.to_json());
  }

  TEST_CASE("entailment filter thresholds inclusively and keeps order") {
    const ScriptedScorer scorer(kProbs);
    const FilterResult r = filter_entailment(small_corpus(), scorer, {});
    REQUIRE(r.kept.size() == 2);
    CHECK(r.kept[0].id == "a");
    CHECK(r.kept[1].id == "b");
    CHECK(ids(r.removed) == std::set<std::string>{"c", "d"});
    CHECK(r.report.per_reason.at("non_entail") == 2);
    CHECK(r.report.input_count == 4);
    CHECK(r.report.removed_count == 2);
  }

  TEST_CASE("report json layout") {
    const ScriptedScorer scorer(kProbs);
    const auto r = filter_entailment(small_corpus(), scorer, {});
    const auto j = nlohmann::ordered_json::parse(r.report.to_json());
    CHECK(j.dump() ==
          R"({"stage":"entailment","input_count":4,"kept_count":2,"removed_count":2,)"
          R"("kept_ratio":0.5,"per_reason":{"non_entail":2},"skipped_ids":[]})");
  }

  TEST_CASE("test split is refused unless allowed") {
    Dataset d = small_corpus();
    d[0].split = Split::kTest;
    const ScriptedScorer scorer(kProbs);
    CHECK_THROWS_AS(filter_entailment(d, scorer, {}), DataError);
    EntailmentFilterOptions opts;
    opts.allow_test_split = true;
    CHECK(filter_entailment(d, scorer, opts).kept.size() == 2);
  }

  TEST_CASE("failure policies") {
    const ScriptedScorer scorer(kProbs, {"s-b"});
    EntailmentFilterOptions opts;
    opts.policy.mode = FailureMode::kFailRun;
    try {
      filter_entailment(small_corpus(), scorer, opts);
      FAIL("expected RemoteError");
    } catch (const RemoteError& e) {
      CHECK(e.instance_id() == "b");
    }

    opts.policy.mode = FailureMode::kSkipAndLog;
    const auto r = filter_entailment(small_corpus(), scorer, opts);
    CHECK(ids(r.kept) == std::set<std::string>{"a"});
    CHECK(r.report.skipped_ids == std::vector<std::string>{"b"});
    CHECK(r.report.per_reason.at("scorer_skipped") == 1);
    CHECK(r.kept.size() + r.removed.size() == 4);
  }

  TEST_CASE("duplicate ids are rejected before scoring") {
    Dataset d = small_corpus();
    d[1].id = "a";
    CHECK_THROWS_AS(filter_entailment(d, ScriptedScorer(kProbs), {}), DataError);
  }

  TEST_CASE("lead truncation pseudo pairs carry provenance") {
    Dataset removed{make("x", "one two three four five", "h"),
                    make("y", "  alpha   beta ", "h"),
                    make("z", "dev source here", "h", Split::kDev),
                    make("t", "test source", "h", Split::kTest)};
    const Dataset p = generate_pseudo(removed, LeadTruncate{3});
    REQUIRE(p.size() == 2);
    CHECK(p[0].id == "x.pseudo");
    CHECK(p[0].headline == "one two three");
    CHECK(p[0].source == removed[0].source);
    CHECK(p[0].origin == Origin::kPseudo);
    CHECK(p[0].metadata.at("generator") == "lead_truncate:3");
    CHECK(p[0].metadata.at("source_id") == "x");
    CHECK(p[1].headline == "alpha beta");

    CHECK(generate_pseudo(removed, LeadTruncate{3}, {.include_dev = true}).size() == 3);
    // Round trip through the corpus format keeps the provenance.
    CHECK(parse_instances(serialize_instances(p, Format::kJsonl), Format::kJsonl)
              .dataset == p);
    // Pseudo pairs are never regenerated.
    CHECK_THROWS_AS(generate_pseudo(p, LeadTruncate{3}), DataError);
  }

  TEST_CASE("external generator") {
    const Dataset removed{make("x", "first words", "h"), make("y", "second one", "h")};
    const ExternalCommand ok{{HLTRUTH_FAKE_GENERATOR}};
    const Dataset p = generate_pseudo(removed, ok);
    REQUIRE(p.size() == 2);
    CHECK(p[0].headline == "gen: first");
    CHECK(p[1].headline == "gen: second");
    CHECK(p[1].metadata.at("generator") ==
          std::string("external:") + HLTRUTH_FAKE_GENERATOR);

    for (const char* mode : {"exit3", "drop_first", "unknown_id", "duplicate", "garbage"}) {
      INFO("mode ", mode);
      const ExternalCommand bad{{HLTRUTH_FAKE_GENERATOR, mode}};
      CHECK_THROWS_AS(generate_pseudo(removed, bad), DataError);
    }
    const ExternalCommand missing{{"/nonexistent/generator"}};
    CHECK_THROWS_AS(generate_pseudo(removed, missing), DataError);
  }

  TEST_CASE("external generator that ignores stdin does not kill the caller") {
    Dataset big;
    for (int i = 0; i < 5000; ++i)
      big.push_back(make("i" + std::to_string(i), std::string(200, 'x'), "h"));
    const ExternalCommand bad{{HLTRUTH_FAKE_GENERATOR, "exit3"}};
    CHECK_THROWS_AS(generate_pseudo(big, bad), DataError);
  }

  TEST_CASE("assembly restores the original size") {
    const auto c = testing::scripted_corpus(200, 4);
    // Unique sources so the scorer can key on them.
    Dataset d = c.dataset;
    for (auto& inst : d) inst.source += " " + inst.id;
    std::map<std::string, double> probs;
    for (const auto& inst : d) probs[inst.source] = c.decisions.at(inst.id);
    const auto r = filter_entailment(d, ScriptedScorer(probs), {});
    const Dataset pseudo = generate_pseudo(r.removed, LeadTruncate{});
    const Dataset both =
        assemble_training_set(r.kept, pseudo, AssembleMode::kFilteredPlusPseudo);
    CHECK(both.size() == d.size());
    CHECK(assemble_training_set(r.kept, pseudo, AssembleMode::kFiltered) == r.kept);
    CHECK_THROWS_AS(
        assemble_training_set(r.kept, r.kept, AssembleMode::kFilteredPlusPseudo),
        DataError);
    CHECK(parse_assemble_mode("filtered+pseudo") == AssembleMode::kFilteredPlusPseudo);
  }

  TEST_CASE("evaluation by hand") {
    const Dataset refs{make("1", "police arrest the suspect downtown", "police arrest suspect"),
                       make("2", "short", "x"),
                       make("3", "markets rallied strongly on friday", "markets rally")};
    const std::vector<GeneratedHeadline> outs{
        {"1", "suspect flees the city"}, {"2", "x"}, {"3", "markets rallied"}};
    const EvalReport r = evaluate(outs, refs, EvalOptions{});
    CHECK(r.n == 2);
    CHECK(r.n_excluded == 1);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].rouge1_f1 == doctest::Approx(200.0 / 7));
    // Support: suspect, the found in the source; flees, city not.
    CHECK(r.rows[0].support == 50.0);
    CHECK(r.rows[1].rouge1_f1 == 50.0);
    CHECK(r.rows[1].support == 100.0);
    CHECK(r.support_mean == 75.0);
    CHECK(r.support_histogram.bin_counts[5] == 1);
    CHECK(r.support_histogram.bin_counts[9] == 1);
    CHECK_FALSE(r.entail_ratio.has_value());
    CHECK(r.to_table() == "R-1\tR-2\tR-L\tSup\tEntail\tn\n39.29\t0.00\t39.29\t75.00\t-\t2\n");
  }

  TEST_CASE("evaluation with a scorer and error cases") {
    const Dataset refs{make("1", "source text one", "h"), make("2", "source text two", "h")};
    const std::vector<GeneratedHeadline> outs{{"1", "a"}, {"2", "b"}};
    const ScriptedScorer scorer({{"source text one", 0.7}, {"source text two", 0.2}});
    EvalOptions opts;
    opts.scorer = &scorer;
    const EvalReport r = evaluate(outs, refs, opts);
    REQUIRE(r.entail_ratio.has_value());
    CHECK(*r.entail_ratio == 0.5);
    CHECK(*r.rows[0].entail_prob == 0.7);

    CHECK_THROWS_AS(evaluate({{"9", "a"}}, refs, {}), DataError);
    CHECK_THROWS_AS(evaluate({{"1", "a"}, {"1", "b"}}, refs, {}), DataError);
  }

  TEST_CASE("evaluation is identical for any worker count") {
    const auto c = testing::scripted_corpus(400, 12);
    std::vector<GeneratedHeadline> outs;
    for (const auto& inst : c.dataset)
      outs.push_back({inst.id, inst.source.substr(0, inst.source.size() / 2)});
    EvalOptions one;
    EvalOptions many;
    many.workers = 8;
    CHECK(evaluate(outs, c.dataset, one).to_json() ==
          evaluate(outs, c.dataset, many).to_json());
  }

  TEST_CASE("correlation report") {
    const Dataset refs{make("1", "aaaa bbbb cccc dddd", "aaaa bbbb"),
                       make("2", "aaaa bbbb cccc dddd", "cccc dddd"),
                       make("3", "aaaa bbbb cccc dddd", "aaaa eeee")};
    const std::vector<GeneratedHeadline> outs{
        {"1", "aaaa bbbb"}, {"2", "cccc zzzz"}, {"3", "yyyy zzzz"}};
    const EvalReport r = evaluate(outs, refs, EvalOptions{});
    const CorrelationReport c = correlation_report(r);
    // (rouge1, support) = (100, 100), (50, 50), (0, 0).
    CHECK(c.correlation.r == doctest::Approx(1.0));
    CHECK(c.scatter_tsv ==
          "1\t100.0000\t100.0000\n2\t50.0000\t50.0000\n3\t0.0000\t0.0000\n");
  }
}

}  // namespace
}  // namespace hltruth
