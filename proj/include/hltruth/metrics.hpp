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

#ifndef HLTRUTH_METRICS_HPP_
#define HLTRUTH_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hltruth {

// Precision, recall and F1 on a 0-100 scale.
struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// F1 from precision and recall; zero when both are zero.
double f_measure(double precision, double recall);

// Clipped multiset n-gram overlap. A zero denominator yields 0 for that
// component. Throws std::invalid_argument for n == 0.
RougeScore rouge_n(std::span<const std::string> reference,
                   std::span<const std::string> candidate, std::size_t n);

// Plain (unweighted) longest common subsequence, no length truncation.
RougeScore rouge_l(std::span<const std::string> reference,
                   std::span<const std::string> candidate);

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

// How much of a headline's wording originates in its source: ROUGE-1 recall
// with the headline as the reference and the source as the candidate.
struct SupportScore {
  double value = 0.0;
  // Empty headline; value is 0 and should not enter aggregates unflagged.
  bool degenerate = false;
};

SupportScore support_score(std::span<const std::string> source,
                           std::span<const std::string> headline);

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
};

// Sample Pearson correlation. Throws DataError on length mismatch, fewer than
// two points, or a zero-variance series.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

// Bins [k*w, (k+1)*w) over [0, 100], last bin closed at 100.
struct Histogram {
  double bin_width = 0.0;
  std::vector<std::size_t> bin_counts;
  std::size_t total = 0;

  double bin_lower(std::size_t k) const { return bin_width * k; }
};

// Throws DataError when bin_width does not divide 100 or a value lies
// outside [0, 100].
Histogram histogram(std::span<const double> values, double bin_width);

// Fraction of values strictly above / below a threshold; 0 for no values.
double fraction_above(std::span<const double> values, double threshold);
double fraction_below(std::span<const double> values, double threshold);

double mean(std::span<const double> values);

}  // namespace hltruth

#endif  // HLTRUTH_METRICS_HPP_
