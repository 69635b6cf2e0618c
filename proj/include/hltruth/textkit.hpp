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

#ifndef HLTRUTH_TEXTKIT_HPP_
#define HLTRUTH_TEXTKIT_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hltruth {

using Tokens = std::vector<std::string>;

enum class TokenizerMode {
  // Unicode word boundaries (UAX #29 with ICU's dictionary segmentation for
  // CJK); whitespace- and punctuation-only segments are dropped.
  kUnicodeWord,
  // Runs of Unicode whitespace. Use this for pre-tokenized input, e.g. the
  // output of an external morphological analyzer joined with spaces.
  kWhitespace,
  // One token per extended grapheme cluster, whitespace skipped.
  kCharacter,
};

std::string_view to_string(TokenizerMode mode);
TokenizerMode parse_tokenizer_mode(std::string_view name);

struct TokenizerConfig {
  TokenizerMode mode = TokenizerMode::kUnicodeWord;
  bool lowercase = true;
  // Replace every Unicode decimal digit with '#'.
  bool mask_digits = false;

  bool operator==(const TokenizerConfig&) const = default;
};

// Total and deterministic; the empty string yields no tokens in every mode.
// Invalid UTF-8 sequences are decoded as U+FFFD.
Tokens tokenize(const TokenizerConfig& config, std::string_view text);

// Full Unicode lowercase (root locale).
std::string to_lower(std::string_view text);

std::string mask_digits(std::string_view text);

// Number of Unicode code points.
std::size_t count_code_points(std::string_view text);

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, std::size_t>;

// All contiguous n-grams with multiplicity. n must be >= 1 (throws
// std::invalid_argument otherwise); fewer than n tokens yields an empty map.
NgramCounts ngrams(std::span<const std::string> tokens, std::size_t n);

// Set of lowercase tokens. Lookups lowercase their argument first.
class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words);

  // One token per line; blank lines and lines starting with '#' are ignored.
  static StopwordList parse(std::string_view text);
  static StopwordList load(const std::filesystem::path& path);

  static const StopwordList& english();
  static const StopwordList& japanese();

  bool contains(std::string_view token) const;
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::unordered_set<std::string> words_;
};

// Tokens that are not stopwords, order preserved.
Tokens content_tokens(std::span<const std::string> tokens,
                      const StopwordList& stopwords);

}  // namespace hltruth

#endif  // HLTRUTH_TEXTKIT_HPP_
