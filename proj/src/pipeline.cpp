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

#include "hltruth/pipeline.hpp"

#include "hltruth/error.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"

namespace hltruth {

using ordered_json = nlohmann::ordered_json;

std::string FilterReport::to_json() const {
  ordered_json j;
  j["stage"] = stage;
  j["input_count"] = input_count;
  j["kept_count"] = kept_count;
  j["removed_count"] = removed_count;
  j["kept_ratio"] = round_to(kept_ratio, 4);
  ordered_json reasons = ordered_json::object();
  for (const auto& [k, v] : per_reason) reasons[k] = v;
  j["per_reason"] = std::move(reasons);
  j["skipped_ids"] = skipped_ids;
  return j.dump(2) + "\n";
}

namespace {

void finish_report(FilterReport& report) {
  report.removed_count = report.input_count - report.kept_count;
  report.kept_ratio =
      report.input_count == 0
          ? 0.0
          : static_cast<double>(report.kept_count) / report.input_count;
}

}  // namespace

FilterResult run_noise_filter(const Dataset& dataset,
                              const NoiseFilterConfig& config,
                              unsigned workers) {
  std::vector<HeuristicVerdict> verdicts(dataset.size());
  parallel_for(dataset.size(), workers, [&](std::size_t i) {
    verdicts[i] = apply_noise_filters(dataset[i], config);
  });
  FilterResult result;
  result.report.stage = "noise";
  result.report.input_count = dataset.size();
  for (auto v : {Violation::kNoContentOverlap, Violation::kBylineMarks,
                 Violation::kQuestionOrColon}) {
    result.report.per_reason[std::string(to_string(v))] = 0;
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (verdicts[i].keep) {
      result.kept.push_back(dataset[i]);
      continue;
    }
    result.removed.push_back(dataset[i]);
    for (auto v : verdicts[i].violations)
      ++result.report.per_reason[std::string(to_string(v))];
  }
  result.report.kept_count = result.kept.size();
  finish_report(result.report);
  return result;
}

FilterResult filter_entailment(const Dataset& dataset,
                               const EntailmentScorer& scorer,
                               const EntailmentFilterOptions& options) {
  if (dataset.empty()) throw DataError("filter: empty dataset");
  if (!(options.threshold > 0.0 && options.threshold < 1.0))
    throw DataError("filter: threshold must lie in (0, 1)");
  if (!options.allow_test_split) {
    for (const auto& inst : dataset) {
      if (inst.split == Split::kTest) {
        throw DataError("filter: instance '" + inst.id +
                        "' is in the test split; test data is never "
                        "filtered (override with --allow-test)");
      }
    }
  }
  check_unique_ids(dataset);

  std::vector<ScoreItem> items;
  items.reserve(dataset.size());
  for (const auto& inst : dataset)
    items.push_back({inst.id, inst.source, inst.headline});
  const auto outcomes = scorer.score_batch(items, options.workers);

  FilterResult result;
  FilterReport& report = result.report;
  report.stage = "entailment";
  report.input_count = dataset.size();
  report.per_reason["non_entail"] = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const ScoreOutcome& o = outcomes[i];
    if (o.error) {
      try {
        std::rethrow_exception(o.error);
      } catch (const RemoteError& e) {
        if (options.policy.mode != FailureMode::kSkipAndLog) {
          throw RemoteError(std::string(e.what()) + " (instance '" +
                                dataset[i].id + "')",
                            dataset[i].id);
        }
      }
      report.skipped_ids.push_back(dataset[i].id);
      ++report.per_reason["scorer_skipped"];
      result.removed.push_back(dataset[i]);
      continue;
    }
    if (classify(o.score->entail_prob, options.threshold) ==
        EntailmentLabel::kEntail) {
      result.kept.push_back(dataset[i]);
    } else {
      ++report.per_reason["non_entail"];
      result.removed.push_back(dataset[i]);
    }
  }
  report.kept_count = result.kept.size();
  finish_report(report);
  return result;
}

std::string_view to_string(AssembleMode mode) {
  return mode == AssembleMode::kFiltered ? "filtered" : "filtered_plus_pseudo";
}

AssembleMode parse_assemble_mode(std::string_view name) {
  if (name == "filtered") return AssembleMode::kFiltered;
  if (name == "filtered_plus_pseudo" || name == "filtered+pseudo")
    return AssembleMode::kFilteredPlusPseudo;
  throw DataError("unknown assemble mode '" + std::string(name) + "'");
}

Dataset assemble_training_set(const Dataset& kept, const Dataset& pseudo,
                              AssembleMode mode) {
  Dataset out = kept;
  if (mode == AssembleMode::kFilteredPlusPseudo) {
    out.insert(out.end(), pseudo.begin(), pseudo.end());
  }
  check_unique_ids(out);
  return out;
}

}  // namespace hltruth
