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

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>

#include "hltruth/corpus.hpp"
#include "hltruth/error.hpp"

namespace hltruth {

namespace {

const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "inc", "corp",
      "co", "ltd", "gen", "gov", "sen", "rep", "lt", "col", "sgt", "capt",
      "vs", "etc", "no", "jan", "feb", "aug", "sept", "oct", "nov", "dec",
      "u.s", "u.k", "u.n", "e.g", "i.e"};
  return kAbbrev;
}

bool is_terminal(UChar32 c) {
  return c == '.' || c == '!' || c == '?' || c == 0x3002 /* 。 */ ||
         c == 0xFF01 /* ！ */ || c == 0xFF1F /* ？ */ || c == 0xFF0E /* ． */;
}

bool is_closer(UChar32 c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x201D ||
         c == 0x2019 || c == 0x300D /* 」 */ || c == 0x300F /* 』 */ ||
         c == 0xFF09 /* ） */;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

SentenceSplitter::SentenceSplitter()
    : SentenceSplitter(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations) {
  for (auto& a : abbreviations) {
    while (!a.empty() && a.back() == '.') a.pop_back();
    abbreviations_.push_back(to_lower(a));
  }
  std::sort(abbreviations_.begin(), abbreviations_.end());
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  std::vector<std::string> out;
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto len = static_cast<std::int32_t>(text.size());
  std::int32_t start = 0;
  std::int32_t i = 0;
  UChar32 prev = -1;
  auto emit = [&](std::int32_t end) {
    const std::string_view piece = trim(text.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  while (i < len) {
    const std::int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (!is_terminal(c)) {
      prev = c;
      continue;
    }
    if (c == '.') {
      UChar32 next = -1;
      if (i < len) {
        std::int32_t j = i;
        U8_NEXT(s, j, len, next);
      }
      // Decimal points, initialisms and hostnames: no space after the period.
      if (next >= 0 && !u_isUWhiteSpace(next) && !is_terminal(next) &&
          !is_closer(next)) {
        prev = c;
        continue;
      }
      // Abbreviation: the whitespace-delimited word ending here.
      std::int32_t w = at;
      while (w > start && text[w - 1] != ' ' && text[w - 1] != '\t' &&
             text[w - 1] != '\n')
        --w;
      const std::string word = to_lower(text.substr(w, at - w));
      const bool initial =
          count_code_points(word) == 1 && prev >= 0 && u_isalpha(prev);
      if (initial || std::binary_search(abbreviations_.begin(),
                                        abbreviations_.end(), word)) {
        prev = c;
        continue;
      }
    }
    // Absorb runs of terminal punctuation and closing quotes/brackets.
    while (i < len) {
      std::int32_t j = i;
      UChar32 next;
      U8_NEXT(s, j, len, next);
      if (!is_terminal(next) && !is_closer(next)) break;
      i = j;
    }
    emit(i);
    prev = -1;
  }
  emit(len);
  return out;
}

CorpusStats corpus_stats(const Dataset& dataset,
                         const TokenizerConfig& tokenizer,
                         const SentenceSplitter& splitter) {
  if (dataset.empty()) throw DataError("corpus_stats: empty dataset");
  CorpusStats st;
  std::size_t sentences = 0;
  for (const auto& inst : dataset) {
    st.n_source_words += tokenize(tokenizer, inst.source).size();
    st.n_headline_words += tokenize(tokenizer, inst.headline).size();
    sentences += splitter.count(inst.source);
  }
  st.n_docs = dataset.size();
  const auto n = static_cast<double>(st.n_docs);
  st.sents_per_doc = sentences / n;
  st.words_per_doc = st.n_source_words / n;
  st.words_per_headline = st.n_headline_words / n;
  return st;
}

}  // namespace hltruth
