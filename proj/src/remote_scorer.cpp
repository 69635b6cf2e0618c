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

#include "hltruth/remote_scorer.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "hltruth/error.hpp"
#include "hltruth/util.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hltruth {

using json = nlohmann::json;

namespace {

double checked_probability(const json& value, const std::string& context) {
  if (!value.is_number()) {
    throw ProtocolViolation(context + ": entail_prob is not a number");
  }
  const double p = value.get<double>();
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw ProtocolViolation(context + ": entail_prob " + value.dump() +
                            " outside [0, 1]");
  }
  return p;
}

json parse_body(const httplib::Result& res, const std::string& what) {
  if (!res) {
    throw RemoteError(what + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProtocolViolation(what + ": HTTP status " +
                            std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProtocolViolation(what + ": malformed response body (" +
                            std::string(e.what()) + ")");
  }
}

template <typename Fn>
auto with_retries(const RemoteConfig& config, Fn&& fn) -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const RemoteError&) {
      if (attempt >= config.retries) throw;
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config.retry_backoff_ms * (attempt + 1)));
    }
  }
}

}  // namespace

RemoteScorer::RemoteScorer(RemoteConfig config) : config_(std::move(config)) {
  const std::string& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw DataError("scorer endpoint '" + url + "' must start with http://");
  }
  if (url.substr(0, scheme_end) != "http") {
    throw DataError("scorer endpoint '" + url +
                    "': only plain http is supported");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    endpoint_.scheme_host_port = url;
  } else {
    endpoint_.scheme_host_port = url.substr(0, path_start);
    endpoint_.base_path = url.substr(path_start);
    while (!endpoint_.base_path.empty() && endpoint_.base_path.back() == '/')
      endpoint_.base_path.pop_back();
  }
  if (config_.max_in_flight == 0) config_.max_in_flight = 1;
  if (config_.retries < 0) config_.retries = 0;
}

std::string RemoteScorer::describe() const {
  return "remote " + config_.endpoint;
}

namespace {

std::unique_ptr<httplib::Client> make_client(const std::string& base,
                                             int timeout_ms) {
  auto client = std::make_unique<httplib::Client>(base);
  const auto sec = timeout_ms / 1000;
  const auto usec = (timeout_ms % 1000) * 1000;
  client->set_connection_timeout(sec, usec);
  client->set_read_timeout(sec, usec);
  client->set_write_timeout(sec, usec);
  client->set_keep_alive(false);
  return client;
}

}  // namespace

bool RemoteScorer::healthy() const {
  auto client = make_client(endpoint_.scheme_host_port, config_.timeout_ms);
  auto res = client->Get(endpoint_.base_path + "/healthz");
  return res && res->status == 200;
}

EntailmentScore RemoteScorer::score_once(std::string_view source,
                                         std::string_view headline) const {
  auto client = make_client(endpoint_.scheme_host_port, config_.timeout_ms);
  json req = {{"premise", source}, {"hypothesis", headline}};
  auto res = client->Post(endpoint_.base_path + "/v1/score", req.dump(),
                          "application/json");
  const json body = parse_body(res, "POST /v1/score");
  if (!body.is_object() || !body.contains("entail_prob")) {
    throw ProtocolViolation("POST /v1/score: response lacks entail_prob");
  }
  return {checked_probability(body["entail_prob"], "POST /v1/score")};
}

EntailmentScore RemoteScorer::score(std::string_view source,
                                    std::string_view headline) const {
  return with_retries(config_, [&] { return score_once(source, headline); });
}

std::vector<EntailmentScore> RemoteScorer::score_chunk_once(
    std::span<const ScoreItem> chunk) const {
  auto client = make_client(endpoint_.scheme_host_port, config_.timeout_ms);
  json items = json::array();
  for (const auto& it : chunk) {
    items.push_back(
        {{"id", it.id}, {"premise", it.premise}, {"hypothesis", it.hypothesis}});
  }
  const json req = {{"items", std::move(items)}};
  auto res = client->Post(endpoint_.base_path + "/v1/score_batch", req.dump(),
                          "application/json");
  const std::string what = "POST /v1/score_batch";
  const json body = parse_body(res, what);
  if (!body.is_object() || !body.contains("items") ||
      !body["items"].is_array()) {
    throw ProtocolViolation(what + ": response lacks an items array");
  }
  const json& out = body["items"];
  if (out.size() != chunk.size()) {
    throw ProtocolViolation(what + ": sent " + std::to_string(chunk.size()) +
                            " items, received " + std::to_string(out.size()));
  }
  std::vector<EntailmentScore> scores;
  scores.reserve(chunk.size());
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const json& o = out[i];
    if (!o.is_object() || !o.contains("id") || !o["id"].is_string() ||
        o["id"].get<std::string>() != chunk[i].id) {
      throw ProtocolViolation(what + ": item " + std::to_string(i) +
                                  " does not echo id '" + chunk[i].id + "'",
                              chunk[i].id);
    }
    if (!o.contains("entail_prob")) {
      throw ProtocolViolation(what + ": item lacks entail_prob", chunk[i].id);
    }
    try {
      scores.push_back(
          {checked_probability(o["entail_prob"], what + " id " + chunk[i].id)});
    } catch (const ProtocolViolation& e) {
      throw ProtocolViolation(e.what(), chunk[i].id);
    }
  }
  return scores;
}

std::vector<ScoreOutcome> RemoteScorer::score_batch(
    std::span<const ScoreItem> items, unsigned /*workers*/) const {
  std::vector<ScoreOutcome> out(items.size());
  const std::size_t chunk = std::max<std::size_t>(1, config_.batch_size);
  const bool single = config_.batch_size <= 1;
  const std::size_t chunks = (items.size() + chunk - 1) / chunk;
  parallel_for(chunks, config_.max_in_flight, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(items.size(), begin + chunk);
    try {
      if (single) {
        out[begin].score =
            score(items[begin].premise, items[begin].hypothesis);
        return;
      }
      const auto scores = with_retries(config_, [&] {
        return score_chunk_once(items.subspan(begin, end - begin));
      });
      for (std::size_t i = begin; i < end; ++i) out[i].score = scores[i - begin];
    } catch (const ProtocolViolation& e) {
      for (std::size_t i = begin; i < end; ++i) {
        out[i].error =
            std::make_exception_ptr(ProtocolViolation(e.what(), items[i].id));
      }
    } catch (const RemoteError& e) {
      for (std::size_t i = begin; i < end; ++i) {
        out[i].error =
            std::make_exception_ptr(RemoteError(e.what(), items[i].id));
      }
    }
  });
  return out;
}

}  // namespace hltruth
