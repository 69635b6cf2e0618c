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

#include <limits>

#include "hltruth/entailment.hpp"
#include "hltruth/error.hpp"
#include "hltruth/metrics.hpp"

namespace hltruth {

const std::array<std::string_view, kFeatureCount>& LexicalFeatures::names() {
  static const std::array<std::string_view, kFeatureCount> kNames = {
      "unigram_recall", "content_recall", "bigram_recall",
      "novel_token_rate", "length_ratio", "lcs_ratio"};
  return kNames;
}

FeatureVector LexicalFeatures::values() const {
  return {unigram_recall, content_recall, bigram_recall,
          novel_token_rate, length_ratio, lcs_ratio};
}

LexicalFeatures extract_features(std::span<const std::string> source,
                                 std::span<const std::string> headline,
                                 const StopwordList& stopwords) {
  if (headline.empty())
    throw DataError("extract_features: empty headline (degenerate input)");
  LexicalFeatures f;
  // Headline as reference, source as candidate: recall is the fraction of
  // headline n-grams found in the source.
  f.unigram_recall = rouge_n(headline, source, 1).recall / 100.0;
  f.bigram_recall = rouge_n(headline, source, 2).recall / 100.0;
  const Tokens content_src = content_tokens(source, stopwords);
  const Tokens content_hl = content_tokens(headline, stopwords);
  f.content_recall = rouge_n(content_hl, content_src, 1).recall / 100.0;
  f.novel_token_rate = 1.0 - f.unigram_recall;
  f.lcs_ratio = static_cast<double>(lcs_length(headline, source)) /
                static_cast<double>(headline.size());
  if (source.empty()) {
    f.source_empty = true;
    f.length_ratio = std::numeric_limits<double>::infinity();
  } else {
    f.length_ratio = static_cast<double>(headline.size()) /
                     static_cast<double>(source.size());
  }
  return f;
}

}  // namespace hltruth
