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

#ifndef HLTRUTH_STUB_SCORER_HPP_
#define HLTRUTH_STUB_SCORER_HPP_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

namespace httplib {
class Server;
}

namespace hltruth {

// A scripted implementation of the entailment wire protocol. It answers from
// lookup tables (batch items by id, then any request by hypothesis text) and
// falls back to a rule; by default the rule is the fraction of hypothesis
// tokens found in the premise. Used for contract tests and offline dry runs
// of the filtering pipeline.
struct StubScript {
  std::map<std::string, double> by_id;
  std::map<std::string, double> by_hypothesis;
  std::function<double(std::string_view premise, std::string_view hypothesis)>
      fallback;
  // Added latency per request, to make concurrency observable.
  std::chrono::milliseconds delay{0};
  // Answer the first N requests with HTTP 503.
  int fail_first = 0;

  // JSONL lines {"id" | "hypothesis", "entail_prob"}. Probabilities are not
  // range-checked so that protocol violations can be scripted.
  static StubScript load(const std::filesystem::path& path);
};

double default_stub_rule(std::string_view premise, std::string_view hypothesis);

class StubScorerServer {
 public:
  // Binds 127.0.0.1 on `port` (0 picks a free port) and starts serving.
  explicit StubScorerServer(StubScript script, int port = 0,
                            std::string host = "127.0.0.1");
  ~StubScorerServer();

  StubScorerServer(const StubScorerServer&) = delete;
  StubScorerServer& operator=(const StubScorerServer&) = delete;

  int port() const { return port_; }
  std::string endpoint() const;

  std::size_t requests() const { return requests_.load(); }
  std::size_t max_in_flight() const { return max_in_flight_.load(); }

  // Blocks until stop() is called from another thread.
  void wait();
  void stop();

 private:
  double lookup(const std::string* id, const std::string& premise,
                const std::string& hypothesis) const;
  bool enter();  // false when the request should fail
  void leave();

  StubScript script_;
  std::string host_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_in_flight_{0};
};

}  // namespace hltruth

#endif  // HLTRUTH_STUB_SCORER_HPP_
