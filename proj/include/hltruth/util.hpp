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

#ifndef HLTRUTH_UTIL_HPP_
#define HLTRUTH_UTIL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hltruth {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is
// visited exactly once; callers write results into pre-sized slots so the
// output order never depends on scheduling. The first exception thrown by
// any task is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

unsigned default_workers();

// Fisher-Yates with a fixed 64-bit Mersenne Twister. Unlike std::shuffle the
// permutation is identical across standard library implementations.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temporary file and renames into place.
void write_file(const std::filesystem::path& path, std::string_view content);

// Fixed-point decimal formatting ("%.*f") independent of the global locale.
std::string format_fixed(double value, int decimals);

// Round half away from zero to the given number of decimals.
double round_to(double value, int decimals);

}  // namespace hltruth

#endif  // HLTRUTH_UTIL_HPP_
