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

#ifndef HLTRUTH_PIPELINE_HPP_
#define HLTRUTH_PIPELINE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hltruth/corpus.hpp"
#include "hltruth/entailment.hpp"
#include "hltruth/heuristics.hpp"
#include "hltruth/metrics.hpp"

namespace hltruth {

// Accounting for one filtering stage. kept_count + removed_count ==
// input_count. per_reason counts removal reasons; an instance removed for
// several reasons is counted under each.
struct FilterReport {
  std::string stage;
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::size_t removed_count = 0;
  double kept_ratio = 0.0;
  std::map<std::string, std::size_t> per_reason;
  // Instances the scorer could not score under skip_and_log; they are
  // removed, never kept.
  std::vector<std::string> skipped_ids;

  std::string to_json() const;
};

struct FilterResult {
  Dataset kept;
  Dataset removed;
  FilterReport report;
};

// Applies the noise heuristics to every instance, preserving input order.
FilterResult run_noise_filter(const Dataset& dataset,
                              const NoiseFilterConfig& config,
                              unsigned workers);

struct EntailmentFilterOptions {
  double threshold = 0.5;
  FailurePolicy policy;
  // Test data is never filtered unless this is set.
  bool allow_test_split = false;
  unsigned workers = 1;
};

// Keeps instances the scorer classifies as entail. Output order follows
// input order. Throws DataError for an empty dataset or test-split input,
// and RemoteError for scorer failures unless the policy is skip_and_log.
FilterResult filter_entailment(const Dataset& dataset,
                               const EntailmentScorer& scorer,
                               const EntailmentFilterOptions& options);

// --- Self-training ---------------------------------------------------------

inline constexpr std::string_view kPseudoSuffix = ".pseudo";
// Metadata key holding the id of the instance a pseudo pair came from.
inline constexpr std::string_view kSourceIdKey = "source_id";

// First k whitespace-delimited source tokens, joined by single spaces.
struct LeadTruncate {
  std::size_t k_tokens = 8;
};

// A child process reading JSONL {"id","source"} on stdin and writing JSONL
// {"id","headline"} on stdout. Decoding settings (beam size and the like)
// belong in argv.
struct ExternalCommand {
  std::vector<std::string> argv;
};

using PseudoGenerator = std::variant<LeadTruncate, ExternalCommand>;

// "lead_truncate:8", "external:<argv joined by spaces>".
std::string generator_id(const PseudoGenerator& generator);

struct PseudoOptions {
  bool include_dev = false;
};

// One pseudo pair per removed train instance (and dev, when enabled). The
// pair keeps the source and split, gets id + ".pseudo", origin pseudo, and
// metadata {generator, source_id}.
Dataset generate_pseudo(const Dataset& removed,
                        const PseudoGenerator& generator,
                        const PseudoOptions& options = {});

enum class AssembleMode { kFiltered, kFilteredPlusPseudo };
std::string_view to_string(AssembleMode mode);
AssembleMode parse_assemble_mode(std::string_view name);

// kept, followed by pseudo pairs in kFilteredPlusPseudo mode. Throws
// DataError on an id collision.
Dataset assemble_training_set(const Dataset& kept, const Dataset& pseudo,
                              AssembleMode mode);

// --- Evaluation ------------------------------------------------------------

struct EvalOptions {
  TokenizerConfig tokenizer;
  // Instances whose source has fewer code points than this are excluded
  // from every aggregate.
  std::size_t min_source_chars = 10;
  double bin_width = 10.0;
  // Optional scorer for the entailment ratio of generated headlines.
  const EntailmentScorer* scorer = nullptr;
  double threshold = 0.5;
  unsigned workers = 1;
};

struct InstanceEval {
  std::string id;
  double rouge1_f1 = 0.0;
  double rouge2_f1 = 0.0;
  double rougeL_f1 = 0.0;
  double support = 0.0;
  bool support_degenerate = false;
  std::optional<double> entail_prob;
};

struct EvalReport {
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
  double support_mean = 0.0;
  std::optional<double> entail_ratio;  // [0, 1]
  std::size_t n = 0;
  std::size_t n_excluded = 0;
  std::size_t n_degenerate = 0;
  Histogram support_histogram;
  std::vector<InstanceEval> rows;  // included instances, output order

  // Scores rounded to 2 decimals, entail_ratio to 2 decimals of a percent.
  std::string to_json() const;
  std::string to_table() const;
};

// Throws DataError listing output ids missing from the references.
EvalReport evaluate(const std::vector<GeneratedHeadline>& outputs,
                    const Dataset& references, const EvalOptions& options);

struct CorrelationReport {
  CorrelationResult correlation;
  // id \t rouge1_f1 \t support, one row per instance.
  std::string scatter_tsv;
};

// Pearson r between per-instance ROUGE-1 F1 and support score.
CorrelationReport correlation_report(const EvalReport& report);

}  // namespace hltruth

#endif  // HLTRUTH_PIPELINE_HPP_
