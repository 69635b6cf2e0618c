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

#include <string>
#include <vector>

#include "doctest.h"
#include "hltruth/error.hpp"
#include "hltruth/textkit.hpp"

namespace hltruth {
namespace {

const TokenizerConfig kWord{TokenizerMode::kUnicodeWord, true, false};

TEST_SUITE("textkit") {
  TEST_CASE("unicode word mode drops punctuation and lowercases") {
    CHECK(tokenize(kWord, "The cat, sat.") == Tokens{"the", "cat", "sat"});
    CHECK(tokenize(kWord, "") == Tokens{});
    CHECK(tokenize(kWord, "  ... !! ") == Tokens{});
  }

  TEST_CASE("lowercase can be disabled") {
    const TokenizerConfig cased{TokenizerMode::kUnicodeWord, false, false};
    CHECK(tokenize(cased, "Serie A table") == Tokens{"Serie", "A", "table"});
  }

  TEST_CASE("whitespace mode keeps punctuation attached") {
    const TokenizerConfig ws{TokenizerMode::kWhitespace, true, false};
    CHECK(tokenize(ws, "U.S.  pact\tsigned\n") ==
          Tokens{"u.s.", "pact", "signed"});
    // Ideographic space U+3000 separates too.
    CHECK(tokenize(ws, "東京　大阪") == Tokens{"東京", "大阪"});
  }

  TEST_CASE("character mode yields grapheme clusters without whitespace") {
    const TokenizerConfig ch{TokenizerMode::kCharacter, true, false};
    CHECK(tokenize(ch, "ab c") == Tokens{"a", "b", "c"});
    CHECK(tokenize(ch, "東京都") == Tokens{"東", "京", "都"});
    // e + combining acute stays one token.
    CHECK(tokenize(ch, "éx") == Tokens{"é", "x"});
  }

  TEST_CASE("japanese text is segmented into several words") {
    const Tokens t = tokenize(kWord, "東京都で会議が開かれた");
    CHECK(t.size() > 1);
    std::string joined;
    for (const auto& s : t) joined += s;
    CHECK(joined == "東京都で会議が開かれた");
  }

  TEST_CASE("digit masking covers non-ascii digits") {
    const TokenizerConfig masked{TokenizerMode::kWhitespace, true, true};
    CHECK(tokenize(masked, "69,700 people") == Tokens{"##,###", "people"});
    CHECK(mask_digits("１２月") == "##月");
    CHECK(mask_digits("no digits") == "no digits");
  }

  TEST_CASE("to_lower handles non-ascii letters") {
    CHECK(to_lower("ÄBC Straße") == "äbc straße");
  }

  TEST_CASE("code points are counted, not bytes") {
    CHECK(count_code_points("") == 0);
    CHECK(count_code_points("abc") == 3);
    CHECK(count_code_points("日本語") == 3);
  }

  TEST_CASE("ngram counts") {
    const Tokens t{"a", "b", "a", "b"};
    const NgramCounts two = ngrams(t, 2);
    CHECK(two.size() == 2);
    CHECK(two.at({"a", "b"}) == 2);
    CHECK(two.at({"b", "a"}) == 1);
    CHECK(ngrams(t, 5).empty());
    CHECK_THROWS_AS(ngrams(t, 0), std::invalid_argument);
  }

  TEST_CASE("tokenizer mode names round-trip") {
    for (auto m : {TokenizerMode::kUnicodeWord, TokenizerMode::kWhitespace,
                   TokenizerMode::kCharacter}) {
      CHECK(parse_tokenizer_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_tokenizer_mode("bpe"), DataError);
  }

  TEST_CASE("stopword lists") {
    const StopwordList& en = StopwordList::english();
    CHECK(en.contains("the"));
    CHECK(en.contains("The"));
    CHECK_FALSE(en.contains("cat"));
    CHECK(en.size() == 153);
    CHECK(StopwordList::japanese().empty());

    const StopwordList custom = StopwordList::parse("# header\nfoo\n\n  bar  \n");
    CHECK(custom.size() == 2);
    CHECK(custom.contains("bar"));
    CHECK_FALSE(custom.contains("# header"));
  }

  TEST_CASE("content tokens drop stopwords and keep order") {
    const Tokens t{"the", "cat", "and", "the", "dog"};
    CHECK(content_tokens(t, StopwordList::english()) == Tokens{"cat", "dog"});
    CHECK(content_tokens(t, StopwordList()) == t);
  }
}

}  // namespace
}  // namespace hltruth
