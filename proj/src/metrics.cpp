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

#include "hltruth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hltruth/error.hpp"
#include "hltruth/textkit.hpp"

namespace hltruth {

double f_measure(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

RougeScore rouge_n(std::span<const std::string> reference,
                   std::span<const std::string> candidate, std::size_t n) {
  const NgramCounts ref = ngrams(reference, n);
  const NgramCounts cand = ngrams(candidate, n);
  const std::size_t ref_total =
      reference.size() >= n ? reference.size() - n + 1 : 0;
  const std::size_t cand_total =
      candidate.size() >= n ? candidate.size() - n + 1 : 0;

  // Both maps are ordered by n-gram; merge-join them.
  std::size_t overlap = 0;
  auto r = ref.begin();
  auto c = cand.begin();
  while (r != ref.end() && c != cand.end()) {
    if (r->first < c->first) {
      ++r;
    } else if (c->first < r->first) {
      ++c;
    } else {
      overlap += std::min(r->second, c->second);
      ++r;
      ++c;
    }
  }

  RougeScore s;
  if (ref_total > 0) s.recall = 100.0 * overlap / ref_total;
  if (cand_total > 0) s.precision = 100.0 * overlap / cand_total;
  s.f1 = f_measure(s.precision, s.recall);
  return s;
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  // Two rolling rows over the shorter sequence.
  if (b.size() > a.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(std::span<const std::string> reference,
                   std::span<const std::string> candidate) {
  const std::size_t l = lcs_length(reference, candidate);
  RougeScore s;
  if (!reference.empty()) s.recall = 100.0 * l / reference.size();
  if (!candidate.empty()) s.precision = 100.0 * l / candidate.size();
  s.f1 = f_measure(s.precision, s.recall);
  return s;
}

SupportScore support_score(std::span<const std::string> source,
                           std::span<const std::string> headline) {
  SupportScore s;
  if (headline.empty()) {
    s.degenerate = true;
    return s;
  }
  s.value = rouge_n(headline, source, 1).recall;
  return s;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

CorrelationResult pearson(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("pearson: series lengths differ (" +
                    std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw DataError("pearson: need at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DataError("pearson: first series has zero variance");
  if (syy == 0.0) throw DataError("pearson: second series has zero variance");
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);
  return {r, x.size()};
}

Histogram histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0) || bin_width > 100.0) {
    throw DataError("histogram: bin width must be in (0, 100]");
  }
  const double bins_real = 100.0 / bin_width;
  const double bins_rounded = std::round(bins_real);
  if (std::abs(bins_real - bins_rounded) > 1e-9 * bins_real) {
    throw DataError("histogram: bin width must divide 100 evenly");
  }
  const auto bins = static_cast<std::size_t>(bins_rounded);
  Histogram h;
  h.bin_width = bin_width;
  h.bin_counts.assign(bins, 0);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 100.0)) {
      throw DataError("histogram: value " + std::to_string(v) +
                      " outside [0, 100]");
    }
    auto k = static_cast<std::size_t>(std::floor(v / bin_width));
    if (k >= bins) k = bins - 1;
    ++h.bin_counts[k];
    ++h.total;
  }
  return h;
}

double fraction_above(std::span<const double> values, double threshold) {
  if (values.empty()) return 0.0;
  const auto n = std::count_if(values.begin(), values.end(),
                               [&](double v) { return v > threshold; });
  return static_cast<double>(n) / values.size();
}

double fraction_below(std::span<const double> values, double threshold) {
  if (values.empty()) return 0.0;
  const auto n = std::count_if(values.begin(), values.end(),
                               [&](double v) { return v < threshold; });
  return static_cast<double>(n) / values.size();
}

}  // namespace hltruth
