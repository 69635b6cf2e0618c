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

#ifndef HLTRUTH_ENTAILMENT_HPP_
#define HLTRUTH_ENTAILMENT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hltruth/corpus.hpp"
#include "hltruth/textkit.hpp"

namespace hltruth {

// Probability in [0, 1] that the source entails the headline.
struct EntailmentScore {
  double entail_prob = 0.0;
};

enum class EntailmentLabel { kEntail, kNonEntail };
std::string_view to_string(EntailmentLabel label);

// Inclusive: prob == threshold is entail.
inline EntailmentLabel classify(double entail_prob, double threshold) {
  return entail_prob >= threshold ? EntailmentLabel::kEntail
                                  : EntailmentLabel::kNonEntail;
}

// --- Lexical features ------------------------------------------------------

inline constexpr std::size_t kFeatureCount = 6;
using FeatureVector = std::array<double, kFeatureCount>;

// Overlap statistics of a headline against its source, all with clipped
// multiset matching. Recall-type features are fractions of the headline.
struct LexicalFeatures {
  double unigram_recall = 0.0;
  double content_recall = 0.0;  // over non-stopword tokens
  double bigram_recall = 0.0;
  double novel_token_rate = 0.0;  // 1 - unigram_recall
  double length_ratio = 0.0;      // |headline| / |source|
  double lcs_ratio = 0.0;         // LCS / |headline|
  // Empty source: length_ratio is +infinity.
  bool source_empty = false;

  static const std::array<std::string_view, kFeatureCount>& names();
  FeatureVector values() const;
};

// Throws DataError for an empty headline.
LexicalFeatures extract_features(std::span<const std::string> source,
                                 std::span<const std::string> headline,
                                 const StopwordList& stopwords);

// --- Logistic-regression baseline ------------------------------------------

struct TrainHyper {
  int epochs = 200;
  double learning_rate = 0.5;
  std::uint64_t seed = 13;
  std::size_t batch_size = 32;
  // Largest allowed epoch-over-epoch rise of the training loss. An epoch
  // that exceeds it is redone from the previous weights at half the
  // learning rate.
  double loss_tolerance = 1e-12;
};

struct TrainingMeta {
  TrainHyper hyper;
  TokenizerConfig tokenizer;
  // Mean training log-loss after each epoch; non-increasing within
  // hyper.loss_tolerance.
  std::vector<double> epoch_losses;
  // Learning rate in effect at the end of training.
  double final_learning_rate = 0.0;
};

struct LexicalModel {
  FeatureVector weights{};
  double bias = 0.0;
  FeatureVector feature_means{};
  FeatureVector feature_stds{1, 1, 1, 1, 1, 1};
  TrainingMeta training_meta;

  // sigmoid(w . standardize(x) + b).
  double predict(const FeatureVector& x) const;

  std::string to_json() const;
  static LexicalModel from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static LexicalModel load(const std::filesystem::path& path);
};

double sigmoid(double z);

struct LabeledInstance {
  Instance instance;
  EntailmentLabel label = EntailmentLabel::kEntail;
};

// Deterministic mini-batch gradient descent on standardized features.
// Throws DataError when only one class is present, a feature is non-finite
// (naming the feature and instance), or the loss becomes non-finite.
LexicalModel train_lexical(std::span<const LabeledInstance> labeled,
                           const TrainHyper& hyper,
                           const TokenizerConfig& tokenizer,
                           const StopwordList& stopwords);

// Same, on precomputed feature vectors. `ids` names rows in errors.
LexicalModel train_on_features(std::span<const FeatureVector> features,
                               std::span<const EntailmentLabel> labels,
                               std::span<const std::string> ids,
                               const TrainHyper& hyper);

// --- Scorers ---------------------------------------------------------------

struct ScoreItem {
  std::string id;
  std::string premise;     // source document
  std::string hypothesis;  // headline
};

struct ScoreOutcome {
  std::optional<EntailmentScore> score;
  std::exception_ptr error;  // set iff !score
};

class EntailmentScorer {
 public:
  virtual ~EntailmentScorer() = default;

  virtual EntailmentScore score(std::string_view source,
                                std::string_view headline) const = 0;

  // outcome[i] belongs to items[i] regardless of completion order. Failures
  // are captured per item rather than thrown.
  virtual std::vector<ScoreOutcome> score_batch(std::span<const ScoreItem> items,
                                                unsigned workers) const;

  virtual std::string describe() const = 0;
};

class LexicalScorer : public EntailmentScorer {
 public:
  LexicalScorer(LexicalModel model, StopwordList stopwords);

  EntailmentScore score(std::string_view source,
                        std::string_view headline) const override;
  std::string describe() const override { return "lexical"; }

  const LexicalModel& model() const { return model_; }

 private:
  LexicalModel model_;
  StopwordList stopwords_;
};

enum class FailureMode { kFailRun, kSkipAndLog, kRetryThenFail };
std::string_view to_string(FailureMode mode);
FailureMode parse_failure_mode(std::string_view name);

struct FailurePolicy {
  FailureMode mode = FailureMode::kRetryThenFail;
  int retries = 3;  // used by kRetryThenFail

  int effective_retries() const {
    return mode == FailureMode::kRetryThenFail ? retries : 0;
  }
};

struct RemoteConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080
  int timeout_ms = 30000;
  unsigned max_in_flight = 4;
  // Items per /v1/score_batch request; 0 or 1 uses /v1/score per item.
  std::size_t batch_size = 16;
  int retries = 3;
  int retry_backoff_ms = 50;
};

enum class ScorerKind { kLexical, kRemote };
std::string_view to_string(ScorerKind kind);
ScorerKind parse_scorer_kind(std::string_view name);

struct ScorerBinding {
  ScorerKind kind = ScorerKind::kLexical;
  std::optional<LexicalModel> model;   // kLexical
  std::optional<RemoteConfig> remote;  // kRemote
  double threshold = 0.5;

  // Exactly one backing matching `kind`; threshold in (0, 1).
  void validate() const;
};

std::unique_ptr<EntailmentScorer> make_scorer(const ScorerBinding& binding,
                                              const StopwordList& stopwords);

EntailmentLabel classify(const EntailmentScorer& scorer, double threshold,
                         std::string_view source, std::string_view headline);

struct ConfusionMatrix {
  std::size_t true_entail = 0;       // gold entail, predicted entail
  std::size_t false_entail = 0;      // gold non_entail, predicted entail
  std::size_t true_non_entail = 0;
  std::size_t false_non_entail = 0;  // gold entail, predicted non_entail

  std::size_t total() const {
    return true_entail + false_entail + true_non_entail + false_non_entail;
  }
  double accuracy() const;
  double precision() const;  // of the entail class
  double recall() const;
};

ConfusionMatrix evaluate_classifier(const EntailmentScorer& scorer,
                                    std::span<const LabeledInstance> labeled,
                                    double threshold, unsigned workers);

}  // namespace hltruth

#endif  // HLTRUTH_ENTAILMENT_HPP_
