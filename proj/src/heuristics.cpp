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

#include "hltruth/heuristics.hpp"

#include <unordered_set>

#include "hltruth/error.hpp"
#include "hltruth/util.hpp"

namespace hltruth {

namespace embedded {
extern const std::string_view kDefaultMarkers;
}  // namespace embedded

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kNoContentOverlap:
      return "no_content_overlap";
    case Violation::kBylineMarks:
      return "byline_marks";
    case Violation::kQuestionOrColon:
      return "question_or_colon";
  }
  return "unknown";
}

bool check_content_overlap(std::span<const std::string> source,
                           std::span<const std::string> headline,
                           const StopwordList& stopwords) {
  std::unordered_set<std::string> source_words;
  for (const auto& t : content_tokens(source, stopwords))
    source_words.insert(to_lower(t));
  for (const auto& t : content_tokens(headline, stopwords))
    if (source_words.count(to_lower(t))) return true;
  return false;
}

MarkerPattern MarkerPattern::parse(std::string_view line) {
  MarkerPattern p;
  p.spec_ = std::string(line);
  if (line.rfind("re:", 0) == 0) {
    p.kind_ = Kind::kRegex;
    try {
      p.regex_ = std::regex(std::string(line.substr(3)),
                            std::regex::ECMAScript | std::regex::icase |
                                std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw DataError("bad marker regex '" + std::string(line) +
                      "': " + e.what());
    }
    return p;
  }
  const bool anchored_start = !line.empty() && line.front() == '^';
  if (anchored_start) line.remove_prefix(1);
  const bool anchored_end = !line.empty() && line.back() == '$';
  if (anchored_end) line.remove_suffix(1);
  if (line.empty()) throw DataError("empty marker pattern");
  p.literal_ = to_lower(line);
  if (anchored_start && anchored_end) {
    p.kind_ = Kind::kWhole;
  } else if (anchored_start) {
    p.kind_ = Kind::kPrefix;
  } else if (anchored_end) {
    p.kind_ = Kind::kSuffix;
  }
  return p;
}

bool MarkerPattern::matches(std::string_view lowered) const {
  switch (kind_) {
    case Kind::kSubstring:
      return lowered.find(literal_) != std::string_view::npos;
    case Kind::kPrefix:
      return lowered.substr(0, literal_.size()) == literal_;
    case Kind::kSuffix:
      return lowered.size() >= literal_.size() &&
             lowered.substr(lowered.size() - literal_.size()) == literal_;
    case Kind::kWhole:
      return lowered == literal_;
    case Kind::kRegex:
      return std::regex_search(lowered.begin(), lowered.end(), regex_);
  }
  return false;
}

MarkerSet MarkerSet::parse(std::string_view text) {
  std::vector<MarkerPattern> patterns;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    patterns.push_back(MarkerPattern::parse(line));
  }
  return MarkerSet(std::move(patterns));
}

MarkerSet MarkerSet::load(const std::filesystem::path& path) {
  try {
    return parse(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

const MarkerSet& MarkerSet::defaults() {
  static const MarkerSet set = parse(embedded::kDefaultMarkers);
  return set;
}

const MarkerPattern* MarkerSet::find_match(std::string_view headline) const {
  const std::string lowered = to_lower(headline);
  for (const auto& p : patterns_)
    if (p.matches(lowered)) return &p;
  return nullptr;
}

bool check_byline_marks(std::string_view headline, const MarkerSet& markers) {
  if (markers.empty()) throw DataError("byline check needs marker patterns");
  return markers.find_match(headline) == nullptr;
}

bool check_punctuation(std::string_view headline) {
  for (std::string_view mark : {"?", ":", "\xEF\xBC\x9F" /* ？ */,
                                "\xEF\xBC\x9A" /* ： */}) {
    if (headline.find(mark) != std::string_view::npos) return false;
  }
  return true;
}

HeuristicVerdict apply_noise_filters(const Instance& instance,
                                     const NoiseFilterConfig& config) {
  HeuristicVerdict v;
  if (config.content_overlap) {
    const Tokens src = tokenize(config.tokenizer, instance.source);
    const Tokens hl = tokenize(config.tokenizer, instance.headline);
    if (!check_content_overlap(src, hl, config.stopwords))
      v.violations.insert(Violation::kNoContentOverlap);
  }
  if (config.byline_marks && !check_byline_marks(instance.headline,
                                                 config.markers)) {
    v.violations.insert(Violation::kBylineMarks);
  }
  if (config.question_or_colon && !check_punctuation(instance.headline))
    v.violations.insert(Violation::kQuestionOrColon);
  v.keep = v.violations.empty();
  return v;
}

}  // namespace hltruth
