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

#ifndef HLTRUTH_REMOTE_SCORER_HPP_
#define HLTRUTH_REMOTE_SCORER_HPP_

#include <string>
#include <string_view>

#include "hltruth/entailment.hpp"

namespace hltruth {

// Client for the entailment wire protocol:
//   POST /v1/score        {"premise","hypothesis"} -> {"entail_prob"}
//   POST /v1/score_batch  {"items":[{"id","premise","hypothesis"}]}
//                         -> {"items":[{"id","entail_prob"}]}, order kept
//   GET  /healthz         200 when ready
// Any non-2xx status, malformed body, id mismatch or probability outside
// [0, 1] is a ProtocolViolation. Transport failures are RemoteErrors. Both
// are retried `retries` times before surfacing.
//
// score_batch keeps at most max_in_flight requests outstanding and ignores
// its `workers` argument.
class RemoteScorer : public EntailmentScorer {
 public:
  explicit RemoteScorer(RemoteConfig config);

  EntailmentScore score(std::string_view source,
                        std::string_view headline) const override;
  std::vector<ScoreOutcome> score_batch(std::span<const ScoreItem> items,
                                        unsigned workers) const override;
  std::string describe() const override;

  bool healthy() const;
  const RemoteConfig& config() const { return config_; }

 private:
  struct Endpoint {
    std::string scheme_host_port;
    std::string base_path;
  };

  EntailmentScore score_once(std::string_view source,
                             std::string_view headline) const;
  std::vector<EntailmentScore> score_chunk_once(
      std::span<const ScoreItem> chunk) const;

  RemoteConfig config_;
  Endpoint endpoint_;
};

}  // namespace hltruth

#endif  // HLTRUTH_REMOTE_SCORER_HPP_
