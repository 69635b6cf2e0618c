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

#ifndef HLTRUTH_ANNOTATE_HPP_
#define HLTRUTH_ANNOTATE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hltruth/corpus.hpp"

namespace hltruth {

inline constexpr std::string_view kGuidelineVersion = "entailment-guideline/1";

// The labeling guideline shown to annotators.
std::string_view guideline_text();

// SHA-256 over the dataset's canonical JSONL serialization.
std::string dataset_hash(const Dataset& dataset);

struct SessionHeader {
  std::string annotator_id;
  std::string dataset_hash;
  std::optional<std::uint64_t> shuffle_seed;
  std::string guideline_version;

  bool operator==(const SessionHeader&) const = default;
};

// One annotator's pass over a dataset, persisted as an append-only JSONL log:
// a {"session": {...}} header line followed by one annotations.jsonl record
// per label. Re-opening the log restores the session; labeled instances are
// never presented again. Skipped instances come back in the next session.
class AnnotationSession {
 public:
  // `dataset` must outlive the session. Opens (or creates) the log; throws
  // DataError when it cannot be written, or when an existing log belongs to
  // another annotator, dataset or shuffle seed.
  AnnotationSession(const Dataset& dataset, std::string annotator_id,
                    std::filesystem::path log_path,
                    std::optional<std::uint64_t> shuffle_seed = std::nullopt);

  // The instance under the cursor, or nullptr when the queue is exhausted.
  const Instance* current() const;
  std::size_t remaining() const;
  std::size_t position() const { return cursor_; }
  std::size_t queue_size() const { return queue_.size(); }

  // Labels the current instance, appends it to the log and advances.
  void label(VoteLabel label);
  void skip();

  const std::vector<AnnotationRecord>& records() const { return records_; }
  const SessionHeader& header() const { return header_; }

  // Interactive loop: e / n / i label, s skips, q quits, ? reprints the
  // guideline. End of input behaves like quit.
  void run(std::istream& in, std::ostream& out);

 private:
  void advance_past_labeled();

  const Dataset& dataset_;
  SessionHeader header_;
  std::filesystem::path log_path_;
  std::ofstream log_;
  std::vector<std::size_t> queue_;  // dataset indices in presentation order
  std::size_t cursor_ = 0;
  std::set<std::string> labeled_;
  std::vector<AnnotationRecord> records_;
};

// Runs one interactive session and returns every record in the log.
std::vector<AnnotationRecord> run_session(
    const Dataset& dataset, const std::string& annotator_id,
    const std::filesystem::path& log_path, std::istream& in, std::ostream& out,
    std::optional<std::uint64_t> shuffle_seed = std::nullopt);

struct UnanimityFlag {
  std::string instance_id;
  bool unanimous = false;
};

struct AgreementReport {
  // Identical-label annotator pairs over all annotator pairs, pooled across
  // instances.
  double raw_agreement = 0.0;
  std::size_t pairs = 0;
  std::vector<UnanimityFlag> per_instance;  // sorted by instance id
  // Instances with fewer than two records.
  std::vector<std::string> excluded;
};

AgreementReport agreement(const std::vector<AnnotationRecord>& records);

}  // namespace hltruth

#endif  // HLTRUTH_ANNOTATE_HPP_
