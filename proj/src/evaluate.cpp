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

#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hltruth/error.hpp"
#include "hltruth/pipeline.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"

namespace hltruth {

using ordered_json = nlohmann::ordered_json;

EvalReport evaluate(const std::vector<GeneratedHeadline>& outputs,
                    const Dataset& references, const EvalOptions& options) {
  std::unordered_map<std::string_view, const Instance*> refs;
  for (const auto& inst : references) refs.emplace(inst.id, &inst);

  std::vector<std::string> missing;
  std::unordered_set<std::string_view> seen;
  for (const auto& o : outputs) {
    if (!refs.count(o.id)) missing.push_back(o.id);
    if (!seen.insert(o.id).second)
      throw DataError("evaluate: output id '" + o.id + "' appears twice");
  }
  if (!missing.empty()) {
    std::string msg = "evaluate: " + std::to_string(missing.size()) +
                      " output id(s) missing from references:";
    for (std::size_t i = 0; i < missing.size() && i < 50; ++i)
      msg += " " + missing[i];
    throw DataError(msg);
  }

  EvalReport report;
  std::vector<const GeneratedHeadline*> included;
  for (const auto& o : outputs) {
    const Instance& ref = *refs.at(o.id);
    if (count_code_points(ref.source) < options.min_source_chars) {
      ++report.n_excluded;
    } else {
      included.push_back(&o);
    }
  }

  report.rows.resize(included.size());
  parallel_for(included.size(), options.workers, [&](std::size_t i) {
    const GeneratedHeadline& o = *included[i];
    const Instance& ref = *refs.at(o.id);
    const Tokens sys = tokenize(options.tokenizer, o.headline);
    const Tokens gold = tokenize(options.tokenizer, ref.headline);
    const Tokens src = tokenize(options.tokenizer, ref.source);
    InstanceEval& row = report.rows[i];
    row.id = o.id;
    row.rouge1_f1 = rouge_n(gold, sys, 1).f1;
    row.rouge2_f1 = rouge_n(gold, sys, 2).f1;
    row.rougeL_f1 = rouge_l(gold, sys).f1;
    const SupportScore sup = support_score(src, sys);
    row.support = sup.value;
    row.support_degenerate = sup.degenerate;
  });

  if (options.scorer != nullptr && !included.empty()) {
    std::vector<ScoreItem> items;
    items.reserve(included.size());
    for (const auto* o : included)
      items.push_back({o->id, refs.at(o->id)->source, o->headline});
    const auto outcomes = options.scorer->score_batch(items, options.workers);
    std::size_t entailed = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].error) std::rethrow_exception(outcomes[i].error);
      const double p = outcomes[i].score->entail_prob;
      report.rows[i].entail_prob = p;
      if (classify(p, options.threshold) == EntailmentLabel::kEntail)
        ++entailed;
    }
    report.entail_ratio = static_cast<double>(entailed) / outcomes.size();
  }

  // Sequential reduction in output order keeps the sums bit-identical
  // regardless of the worker count.
  std::vector<double> supports;
  supports.reserve(report.rows.size());
  double r1 = 0, r2 = 0, rl = 0;
  for (const auto& row : report.rows) {
    r1 += row.rouge1_f1;
    r2 += row.rouge2_f1;
    rl += row.rougeL_f1;
    supports.push_back(row.support);
    report.n_degenerate += row.support_degenerate;
  }
  report.n = report.rows.size();
  if (report.n > 0) {
    const auto n = static_cast<double>(report.n);
    report.rouge1 = r1 / n;
    report.rouge2 = r2 / n;
    report.rougeL = rl / n;
    report.support_mean = mean(supports);
  }
  report.support_histogram = histogram(supports, options.bin_width);
  return report;
}

std::string EvalReport::to_json() const {
  ordered_json j;
  j["rouge1"] = round_to(rouge1, 2);
  j["rouge2"] = round_to(rouge2, 2);
  j["rougeL"] = round_to(rougeL, 2);
  j["support_mean"] = round_to(support_mean, 2);
  j["entail_ratio"] =
      entail_ratio ? ordered_json(round_to(*entail_ratio, 4)) : ordered_json();
  j["n"] = n;
  ordered_json hist;
  hist["bin_width"] = support_histogram.bin_width;
  hist["counts"] = support_histogram.bin_counts;
  hist["total"] = support_histogram.total;
  j["support_histogram"] = std::move(hist);
  j["n_excluded"] = n_excluded;
  j["n_degenerate"] = n_degenerate;
  return j.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  os << "R-1\tR-2\tR-L\tSup\tEntail\tn\n";
  os << format_fixed(rouge1, 2) << '\t' << format_fixed(rouge2, 2) << '\t'
     << format_fixed(rougeL, 2) << '\t' << format_fixed(support_mean, 2)
     << '\t'
     << (entail_ratio ? format_fixed(100.0 * *entail_ratio, 2) + "%"
                      : std::string("-"))
     << '\t' << n << '\n';
  return os.str();
}

CorrelationReport correlation_report(const EvalReport& report) {
  std::vector<double> rouge, support;
  CorrelationReport out;
  for (const auto& row : report.rows) {
    rouge.push_back(row.rouge1_f1);
    support.push_back(row.support);
    out.scatter_tsv += row.id;
    out.scatter_tsv += '\t';
    out.scatter_tsv += format_fixed(row.rouge1_f1, 4);
    out.scatter_tsv += '\t';
    out.scatter_tsv += format_fixed(row.support, 4);
    out.scatter_tsv += '\n';
  }
  out.correlation = pearson(rouge, support);
  return out;
}

}  // namespace hltruth
