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

// Serves the entailment wire protocol from a scripted decision file, for
// dry runs of `hltruth filter` without a model server.

#include <pthread.h>

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "hltruth/stub_scorer.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scripted entailment scorer", "hltruth-stub-scorer"};
  std::string script_path, host = "127.0.0.1";
  int port = 8080;
  int delay_ms = 0;
  app.add_option("--script", script_path,
                 "JSONL {\"id\"|\"hypothesis\", \"entail_prob\"}");
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str();
  app.add_option("--delay-ms", delay_ms)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  // Block the stop signals before the server threads exist so only the
  // sigwait below receives them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  try {
    hltruth::StubScript script;
    if (!script_path.empty()) script = hltruth::StubScript::load(script_path);
    script.delay = std::chrono::milliseconds(delay_ms);
    hltruth::StubScorerServer server(std::move(script), port, host);
    std::cerr << "serving on " << server.endpoint() << '\n';
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "hltruth-stub-scorer: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
