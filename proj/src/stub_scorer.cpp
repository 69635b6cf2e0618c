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

#include "hltruth/stub_scorer.hpp"

#include "hltruth/error.hpp"
#include "hltruth/metrics.hpp"
#include "hltruth/textkit.hpp"
#include "hltruth/util.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hltruth {

using json = nlohmann::json;

double default_stub_rule(std::string_view premise,
                         std::string_view hypothesis) {
  const TokenizerConfig tok{TokenizerMode::kUnicodeWord, true, false};
  const Tokens h = tokenize(tok, hypothesis);
  if (h.empty()) return 0.0;
  return support_score(tokenize(tok, premise), h).value / 100.0;
}

StubScript StubScript::load(const std::filesystem::path& path) {
  StubScript script;
  const std::string text = read_file(path);
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const double p = j.at("entail_prob").get<double>();
      if (j.contains("id")) {
        script.by_id[j["id"].get<std::string>()] = p;
      } else {
        script.by_hypothesis[j.at("hypothesis").get<std::string>()] = p;
      }
    } catch (const json::exception& e) {
      throw DataError(path.string() + " line " + std::to_string(line_no) +
                      ": " + e.what());
    }
  }
  return script;
}

StubScorerServer::StubScorerServer(StubScript script, int port,
                                   std::string host)
    : script_(std::move(script)),
      host_(std::move(host)),
      server_(std::make_unique<httplib::Server>()) {
  if (!script_.fallback) script_.fallback = default_stub_rule;
  server_->new_task_queue = [] { return new httplib::ThreadPool(32); };

  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"status\":\"ok\"}", "application/json");
  });

  server_->Post("/v1/score", [this](const httplib::Request& req,
                                    httplib::Response& res) {
    if (!enter()) {
      res.status = 503;
      leave();
      return;
    }
    try {
      const json body = json::parse(req.body);
      const auto premise = body.at("premise").get<std::string>();
      const auto hypothesis = body.at("hypothesis").get<std::string>();
      json out = {{"entail_prob", lookup(nullptr, premise, hypothesis)}};
      res.set_content(out.dump(), "application/json");
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
    leave();
  });

  server_->Post("/v1/score_batch", [this](const httplib::Request& req,
                                          httplib::Response& res) {
    if (!enter()) {
      res.status = 503;
      leave();
      return;
    }
    try {
      const json body = json::parse(req.body);
      json items = json::array();
      for (const auto& it : body.at("items")) {
        const auto id = it.at("id").get<std::string>();
        const auto premise = it.at("premise").get<std::string>();
        const auto hypothesis = it.at("hypothesis").get<std::string>();
        items.push_back(
            {{"id", id}, {"entail_prob", lookup(&id, premise, hypothesis)}});
      }
      res.set_content(json{{"items", std::move(items)}}.dump(),
                      "application/json");
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
    leave();
  });

  if (port == 0) {
    port_ = server_->bind_to_any_port(host_);
  } else {
    port_ = server_->bind_to_port(host_, port) ? port : -1;
  }
  if (port_ < 0) {
    throw std::runtime_error("stub scorer: cannot bind " + host_ + ":" +
                             std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

StubScorerServer::~StubScorerServer() { stop(); }

void StubScorerServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void StubScorerServer::wait() {
  if (thread_.joinable()) thread_.join();
}

std::string StubScorerServer::endpoint() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

bool StubScorerServer::enter() {
  const std::size_t n = requests_.fetch_add(1);
  const std::size_t now = in_flight_.fetch_add(1) + 1;
  std::size_t seen = max_in_flight_.load();
  while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
  }
  if (script_.delay.count() > 0) std::this_thread::sleep_for(script_.delay);
  return static_cast<int>(n) >= script_.fail_first;
}

void StubScorerServer::leave() { in_flight_.fetch_sub(1); }

double StubScorerServer::lookup(const std::string* id,
                                const std::string& premise,
                                const std::string& hypothesis) const {
  if (id) {
    if (auto it = script_.by_id.find(*id); it != script_.by_id.end())
      return it->second;
  }
  if (auto it = script_.by_hypothesis.find(hypothesis);
      it != script_.by_hypothesis.end())
    return it->second;
  return script_.fallback(premise, hypothesis);
}

}  // namespace hltruth
