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

#ifndef HLTRUTH_CORPUS_HPP_
#define HLTRUTH_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hltruth/textkit.hpp"

namespace hltruth {

enum class Split { kTrain, kDev, kTest };
enum class Origin { kNatural, kPseudo };

std::string_view to_string(Split split);
std::string_view to_string(Origin origin);
Split parse_split(std::string_view name);
Origin parse_origin(std::string_view name);

// Metadata key naming the generator that produced a pseudo headline.
inline constexpr std::string_view kGeneratorKey = "generator";

// One article-headline pair.
struct Instance {
  std::string id;
  std::string source;
  std::string headline;
  Split split = Split::kTrain;
  Origin origin = Origin::kNatural;
  std::map<std::string, std::string> metadata;

  bool operator==(const Instance&) const = default;
};

using Dataset = std::vector<Instance>;

enum class Format { kJsonl, kTsv };
std::string_view to_string(Format format);
Format parse_format(std::string_view name);
// ".tsv" maps to TSV; everything else to JSONL.
Format format_from_path(const std::filesystem::path& path);

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ReadOptions {
  // Split assigned to TSV rows, and to JSONL rows without a "split" key.
  // JSONL rows missing "split" are malformed when this is unset.
  std::optional<Split> default_split;
  // Collect malformed lines instead of failing.
  bool lenient = false;
};

struct ReadResult {
  Dataset dataset;
  std::vector<LineError> errors;
};

// Streams a dataset. Malformed lines fail ingestion with every line number
// listed, unless lenient. A duplicate id is always an error citing both
// lines. Validates the pseudo-origin invariant.
ReadResult read_instances(const std::filesystem::path& path, Format format,
                          const ReadOptions& options = {});
ReadResult parse_instances(std::string_view text, Format format,
                           const ReadOptions& options = {});

struct WriteOptions {
  // TSV has no columns for split, origin or metadata. Writing instances that
  // carry provenance to TSV is refused unless this is set.
  bool allow_lossy_tsv = false;
};

// JSONL rows are compact objects with keys in the fixed order id, source,
// headline, split, origin, metadata (metadata keys sorted).
std::string serialize_instances(const Dataset& dataset, Format format,
                                const WriteOptions& options = {});
void write_instances(const Dataset& dataset, const std::filesystem::path& path,
                     Format format, const WriteOptions& options = {});

std::string instance_to_json_line(const Instance& instance);

// TSV field escaping: backslash, tab, newline and carriage return.
std::string escape_tsv_field(std::string_view field);
std::string unescape_tsv_field(std::string_view field);

// Throws DataError when ids are empty or repeated.
void check_unique_ids(const Dataset& dataset);

// A system output to be evaluated: {"id", "headline"} per JSONL line.
struct GeneratedHeadline {
  std::string id;
  std::string headline;

  bool operator==(const GeneratedHeadline&) const = default;
};

std::vector<GeneratedHeadline> read_generated(
    const std::filesystem::path& path);
std::vector<GeneratedHeadline> parse_generated(std::string_view text);

// --- Entailment annotation -------------------------------------------------

enum class VoteLabel { kEntail, kNonEntail, kIncomprehensible };
enum class AggregateLabel { kEntail, kNonEntail, kUndecided };

std::string_view to_string(VoteLabel label);
std::string_view to_string(AggregateLabel label);
// Accepts "other" as an alias of "incomprehensible".
VoteLabel parse_vote_label(std::string_view name);
AggregateLabel parse_aggregate_label(std::string_view name);

struct AnnotationRecord {
  std::string instance_id;
  std::string annotator_id;
  VoteLabel label = VoteLabel::kEntail;

  bool operator==(const AnnotationRecord&) const = default;
};

// JSONL {"instance_id","annotator_id","label"}. A line that is an object
// with a "session" key is a session-log header and is skipped.
std::vector<AnnotationRecord> parse_annotations(std::string_view text);
std::vector<AnnotationRecord> read_annotations(
    const std::filesystem::path& path);
std::string annotation_to_json_line(const AnnotationRecord& record);

// "min_agree of panel_size". min_agree must be a strict majority of the
// panel so that at most one side can qualify.
struct MajorityRule {
  int min_agree = 2;
  int panel_size = 3;

  // "2of3", "4of5".
  static MajorityRule parse(std::string_view text);
  std::string to_string() const;
};

struct AggregatedLabel {
  std::string instance_id;
  AggregateLabel label = AggregateLabel::kUndecided;
  // Votes backing the resolved label; for undecided, the larger of the two
  // sides.
  int votes_for = 0;
  // All votes, including incomprehensible ones.
  int votes_total = 0;

  bool operator==(const AggregatedLabel&) const = default;
};

// Majority-vote resolution per instance, sorted by instance id (so the
// result does not depend on record order). Throws DataError for a panel
// larger than rule.panel_size or a repeated (instance, annotator) pair.
std::vector<AggregatedLabel> aggregate_votes(
    const std::vector<AnnotationRecord>& records, const MajorityRule& rule);

std::string serialize_aggregated(const std::vector<AggregatedLabel>& labels);
std::vector<AggregatedLabel> parse_aggregated(std::string_view text);

struct EntailRatio {
  std::size_t entail = 0;
  std::size_t non_entail = 0;
  std::size_t undecided = 0;
  // entail / (entail + non_entail + undecided): undecided counted as
  // non-entailing.
  double ratio_all = 0.0;
  // entail / (entail + non_entail): undecided excluded.
  double ratio_decided = 0.0;
};

EntailRatio entail_ratio(const std::vector<AggregatedLabel>& labels);

// --- Corpus statistics -----------------------------------------------------

// Splits on terminal punctuation (. ! ? and the CJK full stop and its
// full-width variants). A period directly after a guarded abbreviation, or
// between two digits, does not end a sentence.
class SentenceSplitter {
 public:
  SentenceSplitter();
  explicit SentenceSplitter(std::vector<std::string> abbreviations);

  std::vector<std::string> split(std::string_view text) const;
  std::size_t count(std::string_view text) const { return split(text).size(); }

 private:
  std::vector<std::string> abbreviations_;  // lowercase, without the period
};

struct CorpusStats {
  std::size_t n_docs = 0;
  std::size_t n_headline_words = 0;
  std::size_t n_source_words = 0;
  double sents_per_doc = 0.0;
  double words_per_doc = 0.0;
  double words_per_headline = 0.0;
};

// Throws DataError on an empty dataset.
CorpusStats corpus_stats(const Dataset& dataset,
                         const TokenizerConfig& tokenizer,
                         const SentenceSplitter& splitter);

}  // namespace hltruth

#endif  // HLTRUTH_CORPUS_HPP_
