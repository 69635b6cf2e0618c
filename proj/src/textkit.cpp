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

#include "hltruth/textkit.hpp"

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <memory>
#include <stdexcept>

#include "hltruth/error.hpp"
#include "hltruth/util.hpp"

namespace hltruth {

namespace embedded {
extern const std::string_view kStopwordsEnglish;
extern const std::string_view kStopwordsJapanese;
}  // namespace embedded

namespace {

bool is_ascii(std::string_view s) {
  for (unsigned char c : s)
    if (c >= 0x80) return false;
  return true;
}

// Break iterators are expensive to build; each thread keeps clones.
icu::BreakIterator& word_iterator() {
  thread_local std::unique_ptr<icu::BreakIterator> it = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> bi(
        icu::BreakIterator::createWordInstance(icu::Locale::getRoot(),
                                               status));
    if (U_FAILURE(status)) throw std::runtime_error("ICU word iterator");
    return bi;
  }();
  return *it;
}

icu::BreakIterator& character_iterator() {
  thread_local std::unique_ptr<icu::BreakIterator> it = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> bi(
        icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(),
                                                    status));
    if (U_FAILURE(status)) throw std::runtime_error("ICU character iterator");
    return bi;
  }();
  return *it;
}

Tokens split_whitespace(std::string_view text) {
  Tokens out;
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto len = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  std::int32_t start = -1;
  while (i < len) {
    const std::int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, len, c);
    const bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) {
        out.emplace_back(text.substr(start, at - start));
        start = -1;
      }
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) out.emplace_back(text.substr(start));
  return out;
}

bool all_whitespace(const icu::UnicodeString& us, int32_t begin, int32_t end) {
  for (int32_t i = begin; i < end;) {
    const UChar32 c = us.char32At(i);
    if (!u_isUWhiteSpace(c)) return false;
    i += U16_LENGTH(c);
  }
  return true;
}

Tokens segment(std::string_view text, icu::BreakIterator& it, bool word_mode) {
  Tokens out;
  const icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  it.setText(us);
  int32_t begin = it.first();
  for (int32_t end = it.next(); end != icu::BreakIterator::DONE;
       begin = end, end = it.next()) {
    if (word_mode) {
      if (it.getRuleStatus() < UBRK_WORD_NONE_LIMIT) continue;
    } else if (all_whitespace(us, begin, end)) {
      continue;
    }
    std::string piece;
    us.tempSubStringBetween(begin, end).toUTF8String(piece);
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace

std::string_view to_string(TokenizerMode mode) {
  switch (mode) {
    case TokenizerMode::kUnicodeWord:
      return "unicode_word";
    case TokenizerMode::kWhitespace:
      return "whitespace";
    case TokenizerMode::kCharacter:
      return "character";
  }
  return "unknown";
}

TokenizerMode parse_tokenizer_mode(std::string_view name) {
  if (name == "unicode_word") return TokenizerMode::kUnicodeWord;
  if (name == "whitespace") return TokenizerMode::kWhitespace;
  if (name == "character") return TokenizerMode::kCharacter;
  throw DataError("unknown tokenizer mode '" + std::string(name) + "'");
}

std::string to_lower(std::string_view text) {
  if (is_ascii(text)) {
    std::string out(text);
    for (char& c : out)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
  }
  icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  us.toLower(icu::Locale::getRoot());
  std::string out;
  us.toUTF8String(out);
  return out;
}

std::string mask_digits(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto len = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < len) {
    const std::int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c >= 0 && u_charType(c) == U_DECIMAL_DIGIT_NUMBER) {
      out.push_back('#');
    } else {
      out.append(text.substr(at, i - at));
    }
  }
  return out;
}

std::size_t count_code_points(std::string_view text) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto len = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  std::size_t n = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    ++n;
  }
  return n;
}

Tokens tokenize(const TokenizerConfig& config, std::string_view text) {
  Tokens tokens;
  if (text.empty()) return tokens;
  switch (config.mode) {
    case TokenizerMode::kWhitespace:
      tokens = split_whitespace(text);
      break;
    case TokenizerMode::kUnicodeWord:
      tokens = segment(text, word_iterator(), /*word_mode=*/true);
      break;
    case TokenizerMode::kCharacter:
      tokens = segment(text, character_iterator(), /*word_mode=*/false);
      break;
  }
  // Masking runs per token, after segmentation, so "3.4" stays one token.
  for (auto& tok : tokens) {
    if (config.lowercase) tok = to_lower(tok);
    if (config.mask_digits) tok = mask_digits(tok);
  }
  return tokens;
}

NgramCounts ngrams(std::span<const std::string> tokens, std::size_t n) {
  if (n == 0) throw std::invalid_argument("n-gram order must be >= 1");
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

StopwordList::StopwordList(std::unordered_set<std::string> words) {
  for (const auto& w : words) words_.insert(to_lower(w));
}

StopwordList StopwordList::parse(std::string_view text) {
  std::unordered_set<std::string> words;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') words.emplace(line);
    pos = eol + 1;
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const StopwordList& StopwordList::english() {
  static const StopwordList list = parse(embedded::kStopwordsEnglish);
  return list;
}

const StopwordList& StopwordList::japanese() {
  static const StopwordList list = parse(embedded::kStopwordsJapanese);
  return list;
}

bool StopwordList::contains(std::string_view token) const {
  if (words_.empty()) return false;
  return words_.count(to_lower(token)) > 0;
}

Tokens content_tokens(std::span<const std::string> tokens,
                      const StopwordList& stopwords) {
  Tokens out;
  for (const auto& t : tokens)
    if (!stopwords.contains(t)) out.push_back(t);
  return out;
}

}  // namespace hltruth
