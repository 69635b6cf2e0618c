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

#include "hltruth/entailment.hpp"

#include "hltruth/error.hpp"
#include "hltruth/remote_scorer.hpp"
#include "hltruth/util.hpp"

namespace hltruth {

std::string_view to_string(EntailmentLabel label) {
  return label == EntailmentLabel::kEntail ? "entail" : "non_entail";
}

std::string_view to_string(FailureMode mode) {
  switch (mode) {
    case FailureMode::kFailRun:
      return "fail_run";
    case FailureMode::kSkipAndLog:
      return "skip_and_log";
    case FailureMode::kRetryThenFail:
      return "retry_n_then_fail";
  }
  return "unknown";
}

FailureMode parse_failure_mode(std::string_view name) {
  if (name == "fail_run") return FailureMode::kFailRun;
  if (name == "skip_and_log") return FailureMode::kSkipAndLog;
  if (name == "retry_n_then_fail" || name == "retry")
    return FailureMode::kRetryThenFail;
  throw DataError("unknown failure policy '" + std::string(name) + "'");
}

std::string_view to_string(ScorerKind kind) {
  return kind == ScorerKind::kRemote ? "remote" : "lexical";
}

ScorerKind parse_scorer_kind(std::string_view name) {
  if (name == "lexical") return ScorerKind::kLexical;
  if (name == "remote") return ScorerKind::kRemote;
  throw DataError("unknown scorer kind '" + std::string(name) + "'");
}

std::vector<ScoreOutcome> EntailmentScorer::score_batch(
    std::span<const ScoreItem> items, unsigned workers) const {
  std::vector<ScoreOutcome> out(items.size());
  parallel_for(items.size(), workers, [&](std::size_t i) {
    try {
      out[i].score = score(items[i].premise, items[i].hypothesis);
    } catch (...) {
      out[i].error = std::current_exception();
    }
  });
  return out;
}

LexicalScorer::LexicalScorer(LexicalModel model, StopwordList stopwords)
    : model_(std::move(model)), stopwords_(std::move(stopwords)) {}

EntailmentScore LexicalScorer::score(std::string_view source,
                                     std::string_view headline) const {
  const TokenizerConfig& tok = model_.training_meta.tokenizer;
  const Tokens src = tokenize(tok, source);
  const Tokens hl = tokenize(tok, headline);
  const LexicalFeatures f = extract_features(src, hl, stopwords_);
  if (f.source_empty) {
    throw DataError("lexical scorer: empty source (degenerate input)");
  }
  return {model_.predict(f.values())};
}

void ScorerBinding::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw DataError("scorer threshold must lie in (0, 1)");
  switch (kind) {
    case ScorerKind::kLexical:
      if (!model || remote)
        throw DataError("lexical binding needs a model and no endpoint");
      break;
    case ScorerKind::kRemote:
      if (!remote || model)
        throw DataError("remote binding needs an endpoint and no model");
      if (remote->endpoint.empty())
        throw DataError("remote binding has an empty endpoint");
      if (remote->max_in_flight == 0)
        throw DataError("remote max_in_flight must be >= 1");
      break;
  }
}

std::unique_ptr<EntailmentScorer> make_scorer(const ScorerBinding& binding,
                                              const StopwordList& stopwords) {
  binding.validate();
  if (binding.kind == ScorerKind::kLexical)
    return std::make_unique<LexicalScorer>(*binding.model, stopwords);
  return std::make_unique<RemoteScorer>(*binding.remote);
}

EntailmentLabel classify(const EntailmentScorer& scorer, double threshold,
                         std::string_view source, std::string_view headline) {
  return classify(scorer.score(source, headline).entail_prob, threshold);
}

double ConfusionMatrix::accuracy() const {
  const std::size_t n = total();
  return n == 0 ? 0.0
                : static_cast<double>(true_entail + true_non_entail) / n;
}

double ConfusionMatrix::precision() const {
  const std::size_t d = true_entail + false_entail;
  return d == 0 ? 0.0 : static_cast<double>(true_entail) / d;
}

double ConfusionMatrix::recall() const {
  const std::size_t d = true_entail + false_non_entail;
  return d == 0 ? 0.0 : static_cast<double>(true_entail) / d;
}

ConfusionMatrix evaluate_classifier(const EntailmentScorer& scorer,
                                    std::span<const LabeledInstance> labeled,
                                    double threshold, unsigned workers) {
  std::vector<ScoreItem> items;
  items.reserve(labeled.size());
  for (const auto& ex : labeled)
    items.push_back({ex.instance.id, ex.instance.source, ex.instance.headline});
  const auto outcomes = scorer.score_batch(items, workers);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (outcomes[i].error) std::rethrow_exception(outcomes[i].error);
    const bool gold = labeled[i].label == EntailmentLabel::kEntail;
    const bool pred = classify(outcomes[i].score->entail_prob, threshold) ==
                      EntailmentLabel::kEntail;
    if (gold && pred) ++cm.true_entail;
    if (!gold && pred) ++cm.false_entail;
    if (!gold && !pred) ++cm.true_non_entail;
    if (gold && !pred) ++cm.false_non_entail;
  }
  return cm;
}

}  // namespace hltruth
