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

#ifndef HLTRUTH_HEURISTICS_HPP_
#define HLTRUTH_HEURISTICS_HPP_

#include <filesystem>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hltruth/corpus.hpp"
#include "hltruth/textkit.hpp"

namespace hltruth {

// Instance-removal rules used to build the lead-sentence headline setting.
enum class Violation { kNoContentOverlap, kBylineMarks, kQuestionOrColon };

std::string_view to_string(Violation v);

struct HeuristicVerdict {
  bool keep = true;  // iff violations is empty
  std::set<Violation> violations;
};

// True iff source and headline share at least one non-stopword token
// (case-insensitive).
bool check_content_overlap(std::span<const std::string> source,
                           std::span<const std::string> headline,
                           const StopwordList& stopwords);

// One byline / editing-mark pattern. Grammar, matched case-insensitively:
//   text     substring        ^text    prefix
//   text$    suffix           ^text$   whole headline
//   re:expr  ECMAScript regex, search semantics
class MarkerPattern {
 public:
  static MarkerPattern parse(std::string_view line);

  bool matches(std::string_view lowered_headline) const;
  const std::string& spec() const { return spec_; }

 private:
  enum class Kind { kSubstring, kPrefix, kSuffix, kWhole, kRegex };
  Kind kind_ = Kind::kSubstring;
  std::string spec_;
  std::string literal_;  // lowercased
  std::regex regex_;
};

class MarkerSet {
 public:
  MarkerSet() = default;
  explicit MarkerSet(std::vector<MarkerPattern> patterns)
      : patterns_(std::move(patterns)) {}

  // One pattern per line; '#' comments and blank lines ignored.
  static MarkerSet parse(std::string_view text);
  static MarkerSet load(const std::filesystem::path& path);
  static const MarkerSet& defaults();

  // The first matching pattern, or nullptr.
  const MarkerPattern* find_match(std::string_view headline) const;
  bool empty() const { return patterns_.empty(); }
  std::size_t size() const { return patterns_.size(); }

 private:
  std::vector<MarkerPattern> patterns_;
};

// True iff no marker matches. Throws DataError for an empty marker set.
bool check_byline_marks(std::string_view headline, const MarkerSet& markers);

// True iff the headline has no '?' or ':' (ASCII or full-width).
bool check_punctuation(std::string_view headline);

struct NoiseFilterConfig {
  bool content_overlap = true;
  bool byline_marks = true;
  bool question_or_colon = true;
  TokenizerConfig tokenizer;
  StopwordList stopwords = StopwordList::english();
  MarkerSet markers = MarkerSet::defaults();
};

// Runs every enabled check and reports all violations.
HeuristicVerdict apply_noise_filters(const Instance& instance,
                                     const NoiseFilterConfig& config);

}  // namespace hltruth

#endif  // HLTRUTH_HEURISTICS_HPP_
