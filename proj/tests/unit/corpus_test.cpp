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
#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "hltruth/corpus.hpp"
#include "hltruth/error.hpp"
#include "hltruth/util.hpp"

namespace hltruth {
namespace {

Instance make(std::string id, std::string source, std::string headline,
              Split split = Split::kTrain) {
  Instance i;
  i.id = std::move(id);
  i.source = std::move(source);
  i.headline = std::move(headline);
  i.split = split;
  return i;
}

std::vector<AnnotationRecord> votes(const std::string& id,
                                    std::initializer_list<VoteLabel> labels) {
  std::vector<AnnotationRecord> out;
  int k = 0;
  for (auto l : labels) out.push_back({id, "a" + std::to_string(k++), l});
  return out;
}

constexpr auto E = VoteLabel::kEntail;
constexpr auto N = VoteLabel::kNonEntail;
constexpr auto I = VoteLabel::kIncomprehensible;

TEST_SUITE("corpus") {
  TEST_CASE("jsonl round trip preserves every field") {
    Dataset d{make("1", "Lazio and Roma meet.", "Derby day"),
              make("2", "tab\there \"quoted\" ünïcode 東京", "x", Split::kDev)};
    d[1].origin = Origin::kPseudo;
    d[1].metadata = {{"generator", "lead_truncate:8"}, {"source_id", "9"}};
    const std::string text = serialize_instances(d, Format::kJsonl);
    CHECK(parse_instances(text, Format::kJsonl).dataset == d);
    CHECK(serialize_instances(parse_instances(text, Format::kJsonl).dataset,
                              Format::kJsonl) == text);
  }

  TEST_CASE("jsonl line layout is fixed") {
    CHECK(instance_to_json_line(make("a", "s", "h")) ==
          R"({"id":"a","source":"s","headline":"h","split":"train","origin":"natural","metadata":{}})");
  }

  TEST_CASE("tsv round trip with escapes") {
    Dataset d{make("1", "a\tb\nc\\d", "h\r"), make("2", "plain", "text")};
    const std::string text = serialize_instances(d, Format::kTsv);
    CHECK(text == "1\ta\\tb\\nc\\\\d\th\\r\n2\tplain\ttext\n");
    CHECK(parse_instances(text, Format::kTsv).dataset == d);
    for (const std::string s : {"", "\\", "\\\\t", "a\\b", "\t\t"}) {
      CHECK(unescape_tsv_field(escape_tsv_field(s)) == s);
    }
  }

  TEST_CASE("tsv refuses provenance it cannot hold") {
    Dataset d{make("1", "s", "h")};
    d[0].origin = Origin::kPseudo;
    d[0].metadata = {{"generator", "g"}};
    CHECK_THROWS_AS(serialize_instances(d, Format::kTsv), DataError);
    CHECK_NOTHROW(serialize_instances(d, Format::kTsv, {.allow_lossy_tsv = true}));
  }

  TEST_CASE("tsv needs exactly three fields and takes the default split") {
    CHECK_THROWS_AS(parse_instances("1\tonly two\n", Format::kTsv), DataError);
    const auto r = parse_instances("1\ts\th\n", Format::kTsv,
                                   {.default_split = Split::kTest});
    CHECK(r.dataset.at(0).split == Split::kTest);
  }

  TEST_CASE("duplicate ids are reported with both line numbers") {
    const std::string text =
        "{\"id\":\"x\",\"source\":\"s\",\"headline\":\"h\",\"split\":\"train\"}\n"
        "\n"
        "{\"id\":\"x\",\"source\":\"t\",\"headline\":\"g\",\"split\":\"train\"}\n";
    try {
      parse_instances(text, Format::kJsonl);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()) == "duplicate id 'x' on lines 1 and 3");
    }
  }

  TEST_CASE("malformed lines fail unless lenient") {
    const std::string text =
        "{\"id\":\"a\",\"source\":\"s\",\"headline\":\"h\",\"split\":\"train\"}\n"
        "{not json\n"
        "{\"id\":\"b\",\"source\":\"s\",\"split\":\"train\"}\n"
        "{\"id\":\"c\",\"source\":\"s\",\"headline\":\"h\",\"split\":\"train\","
        "\"origin\":\"pseudo\"}\n";
    CHECK_THROWS_AS(parse_instances(text, Format::kJsonl), DataError);
    const auto r = parse_instances(text, Format::kJsonl, {.default_split = std::nullopt, .lenient = true});
    REQUIRE(r.dataset.size() == 1);
    REQUIRE(r.errors.size() == 3);
    CHECK(r.errors[0].line == 2);
    CHECK(r.errors[1].line == 3);
    CHECK(r.errors[2].line == 4);
  }

  TEST_CASE("split is required in jsonl without a default") {
    const std::string line = "{\"id\":\"a\",\"source\":\"s\",\"headline\":\"h\"}\n";
    CHECK_THROWS_AS(parse_instances(line, Format::kJsonl), DataError);
    CHECK(parse_instances(line, Format::kJsonl, {.default_split = Split::kDev})
              .dataset.at(0)
              .split == Split::kDev);
  }

  TEST_CASE("files round trip and report their path on error") {
    const auto dir = std::filesystem::temp_directory_path() / "hltruth_corpus_test";
    std::filesystem::create_directories(dir);
    const Dataset d{make("1", "s", "h")};
    write_instances(d, dir / "x.jsonl", Format::kJsonl);
    CHECK(read_instances(dir / "x.jsonl", Format::kJsonl).dataset == d);
    CHECK(format_from_path(dir / "x.tsv") == Format::kTsv);
    CHECK(format_from_path(dir / "x.jsonl") == Format::kJsonl);
    write_file(dir / "bad.jsonl", "{}\n");
    try {
      read_instances(dir / "bad.jsonl", Format::kJsonl);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("bad.jsonl") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("generated headlines") {
    const auto g = parse_generated("{\"id\":\"1\",\"headline\":\"h\"}\n\n");
    REQUIRE(g.size() == 1);
    CHECK(g[0] == GeneratedHeadline{"1", "h"});
    CHECK_THROWS_AS(parse_generated("{\"id\":\"1\"}\n"), DataError);
  }

  TEST_CASE("annotation records parse and skip session headers") {
    const std::string text =
        "{\"session\":{\"annotator_id\":\"a\"}}\n"
        "{\"instance_id\":\"1\",\"annotator_id\":\"a\",\"label\":\"entail\"}\n"
        "{\"instance_id\":\"2\",\"annotator_id\":\"a\",\"label\":\"other\"}\n";
    const auto recs = parse_annotations(text);
    REQUIRE(recs.size() == 2);
    CHECK(recs[1].label == VoteLabel::kIncomprehensible);
    CHECK(annotation_to_json_line(recs[0]) ==
          R"({"instance_id":"1","annotator_id":"a","label":"entail"})");
    CHECK_THROWS_AS(
        parse_annotations("{\"instance_id\":\"1\",\"annotator_id\":\"a\","
                          "\"label\":\"maybe\"}\n"),
        DataError);
  }

  TEST_CASE("majority rule parsing") {
    CHECK(MajorityRule::parse("2of3").min_agree == 2);
    CHECK(MajorityRule::parse("4of5").panel_size == 5);
    CHECK(MajorityRule::parse("3of5").to_string() == "3of5");
    for (const char* bad : {"1of2", "2of4", "4of3", "of3", "2of", "2x3", "a of b"})
      CHECK_THROWS_AS(MajorityRule::parse(bad), DataError);
  }

  TEST_CASE("2of3 aggregation") {
    std::vector<AnnotationRecord> r;
    for (auto& v : votes("a", {E, E, N})) r.push_back(v);
    for (auto& v : votes("b", {N, N, I})) r.push_back(v);
    for (auto& v : votes("c", {E, N, I})) r.push_back(v);
    for (auto& v : votes("d", {I, I, E})) r.push_back(v);
    const auto out = aggregate_votes(r, MajorityRule{});
    REQUIRE(out.size() == 4);
    CHECK(out[0] == AggregatedLabel{"a", AggregateLabel::kEntail, 2, 3});
    CHECK(out[1] == AggregatedLabel{"b", AggregateLabel::kNonEntail, 2, 3});
    CHECK(out[2] == AggregatedLabel{"c", AggregateLabel::kUndecided, 1, 3});
    CHECK(out[3] == AggregatedLabel{"d", AggregateLabel::kUndecided, 1, 3});

    const EntailRatio ratio = entail_ratio(out);
    CHECK(ratio.entail == 1);
    CHECK(ratio.non_entail == 1);
    CHECK(ratio.undecided == 2);
    CHECK(ratio.ratio_all == 0.25);
    CHECK(ratio.ratio_decided == 0.5);
  }

  TEST_CASE("aggregation rejects oversize panels and repeat votes") {
    CHECK_THROWS_AS(aggregate_votes(votes("a", {E, E, E, E}), MajorityRule{}),
                    DataError);
    auto twice = votes("a", {E});
    twice.push_back(twice[0]);
    CHECK_THROWS_AS(aggregate_votes(twice, MajorityRule{}), DataError);
  }

  TEST_CASE("aggregation is independent of record order") {
    std::vector<AnnotationRecord> r;
    const VoteLabel pool[] = {E, N, I};
    std::mt19937_64 rng(1);
    for (int i = 0; i < 40; ++i)
      for (int k = 0; k < 3; ++k)
        r.push_back({"i" + std::to_string(i), "a" + std::to_string(k),
                     pool[rng() % 3]});
    const auto base = aggregate_votes(r, MajorityRule{});
    for (int t = 0; t < 10; ++t) {
      std::shuffle(r.begin(), r.end(), rng);
      REQUIRE(aggregate_votes(r, MajorityRule{}) == base);
    }
    CHECK(parse_aggregated(serialize_aggregated(base)) == base);
  }

  TEST_CASE("sentence splitting") {
    const SentenceSplitter s;
    CHECK(s.count("One. Two! Three?") == 3);
    CHECK(s.count("Mr. Smith paid 3.5 million to the U.S. Treasury.") == 1);
    CHECK(s.count("He said \"stop.\" Then he left.") == 2);
    CHECK(s.count("Wait... what?!") == 2);
    CHECK(s.count("東京で会議。大阪で発表。") == 2);
    CHECK(s.count("no terminal punctuation") == 1);
    CHECK(s.count("   ") == 0);
    CHECK(s.count("J. R. Smith arrived. Visit example.com today.") == 2);
  }

  TEST_CASE("corpus statistics") {
    const Dataset d{make("1", "One two three. Four five.", "Six seven"),
                    make("2", "Eight nine ten eleven.", "Twelve")};
    const CorpusStats st = corpus_stats(d, TokenizerConfig{}, SentenceSplitter());
    CHECK(st.n_docs == 2);
    CHECK(st.n_source_words == 9);
    CHECK(st.n_headline_words == 3);
    CHECK(st.sents_per_doc == 1.5);
    CHECK(st.words_per_doc == 4.5);
    CHECK(st.words_per_headline == 1.5);
    CHECK_THROWS_AS(corpus_stats({}, TokenizerConfig{}, SentenceSplitter()),
                    DataError);
  }
}

}  // namespace
}  // namespace hltruth
