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

// Deterministic synthetic data shared by the unit and acceptance suites.

#ifndef HLTRUTH_TESTS_SUPPORT_SYNTHETIC_HPP_
#define HLTRUTH_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hltruth/corpus.hpp"
#include "hltruth/entailment.hpp"

namespace hltruth::testing {

inline std::string join_words(const std::vector<std::string>& w) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

inline std::string padded_id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%05zu", prefix, i);
  return buf;
}

// Entailed headlines draw every word from their source; the others draw
// from a disjoint vocabulary, so unigram recall alone separates the classes.
inline std::vector<LabeledInstance> separable_set(std::size_t n,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> src_len(8, 20), hl_len(3, 6),
      word(0, 499);
  std::vector<LabeledInstance> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> src(src_len(rng));
    for (auto& w : src) w = "src" + std::to_string(word(rng));
    std::vector<std::string> hl(hl_len(rng));
    const bool entail = i % 2 == 0;
    for (auto& w : hl) {
      w = entail ? src[rng() % src.size()] : "alt" + std::to_string(word(rng));
    }
    LabeledInstance li;
    li.instance.id = padded_id("sep", i);
    li.instance.source = join_words(src);
    li.instance.headline = join_words(hl);
    li.label = entail ? EntailmentLabel::kEntail : EntailmentLabel::kNonEntail;
    out.push_back(std::move(li));
  }
  return out;
}

struct ScriptedCorpus {
  Dataset dataset;
  std::map<std::string, double> decisions;  // id -> entail_prob
};

// Train-split corpus with a per-id scripted probability, uniform on a
// 0.001 grid; every 97th sits exactly on 0.5.
inline ScriptedCorpus scripted_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(5, 15), word(0, 299);
  ScriptedCorpus c;
  for (std::size_t i = 0; i < n; ++i) {
    Instance inst;
    inst.id = padded_id("doc", i);
    std::vector<std::string> src(len(rng));
    for (auto& w : src) w = "w" + std::to_string(word(rng));
    inst.source = join_words(src);
    inst.headline = join_words({src[0], src[src.size() / 2], "h" + std::to_string(i)});
    inst.split = Split::kTrain;
    double p = static_cast<double>(rng() % 1000) / 1000.0;
    if (i % 97 == 0) p = 0.5;
    c.decisions[inst.id] = p;
    c.dataset.push_back(std::move(inst));
  }
  return c;
}

}  // namespace hltruth::testing

#endif  // HLTRUTH_TESTS_SUPPORT_SYNTHETIC_HPP_
