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

#include "hltruth/annotate.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>

#include "hltruth/error.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"

namespace hltruth {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view guideline_text() {
  static constexpr std::string_view kText =
      "Guideline for entailment labeling\n"
      "\n"
      "Entail\n"
      "  - All facts of the headline are covered by those of the article.\n"
      "  - If the headline includes an expression that do not appear in the "
      "article, but if the fact mentioned by the expression can be derived "
      "from the article, judge the pair as \"Entail\".\n"
      "Non-entail\n"
      "  - The statement of the headline conflicts with the article.\n"
      "  - The headline mentions facts that cannot be confirmed by the "
      "article.\n"
      "Incomprehensible\n"
      "  - Impossible to judge because the article or headline is unreadable. "
      "If the headline is not grammatically complete but correct as the "
      "headline style, please try to judge either entail or non-entail.\n"
      "  - Other problems such as garbled characters.\n";
  return kText;
}

std::string dataset_hash(const Dataset& dataset) {
  return sha256_hex(serialize_instances(dataset, Format::kJsonl));
}

namespace {

std::string header_line(const SessionHeader& h) {
  ordered_json s;
  s["annotator_id"] = h.annotator_id;
  s["dataset_hash"] = h.dataset_hash;
  s["shuffle_seed"] = h.shuffle_seed ? ordered_json(*h.shuffle_seed)
                                     : ordered_json();
  s["guideline_version"] = h.guideline_version;
  ordered_json line;
  line["session"] = std::move(s);
  return line.dump();
}

SessionHeader parse_header(const json& j) {
  const json& s = j.at("session");
  SessionHeader h;
  h.annotator_id = s.at("annotator_id").get<std::string>();
  h.dataset_hash = s.at("dataset_hash").get<std::string>();
  if (!s.at("shuffle_seed").is_null())
    h.shuffle_seed = s.at("shuffle_seed").get<std::uint64_t>();
  h.guideline_version = s.at("guideline_version").get<std::string>();
  return h;
}

}  // namespace

AnnotationSession::AnnotationSession(const Dataset& dataset,
                                     std::string annotator_id,
                                     std::filesystem::path log_path,
                                     std::optional<std::uint64_t> shuffle_seed)
    : dataset_(dataset), log_path_(std::move(log_path)) {
  if (dataset_.empty()) throw DataError("annotate: empty dataset");
  if (annotator_id.empty()) throw DataError("annotate: empty annotator id");
  header_ = {std::move(annotator_id), dataset_hash(dataset_), shuffle_seed,
             std::string(kGuidelineVersion)};

  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < dataset_.size(); ++i)
    index.emplace(dataset_[i].id, i);

  bool fresh = true;
  bool needs_newline = false;
  std::error_code ec;
  if (std::filesystem::exists(log_path_, ec) &&
      std::filesystem::file_size(log_path_, ec) > 0) {
    fresh = false;
    const std::string text = read_file(log_path_);
    needs_newline = text.back() != '\n';
    std::size_t pos = 0, line_no = 0, line_start = 0;
    bool saw_header = false;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const std::string line = text.substr(pos, eol - pos);
      line_start = pos;
      pos = eol + 1;
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        // A crash can truncate the final append; drop it. Anything earlier
        // is corrupt.
        if (pos >= text.size()) {
          std::filesystem::resize_file(log_path_, line_start);
          needs_newline = false;
          break;
        }
        throw DataError(log_path_.string() + " line " +
                        std::to_string(line_no) + ": malformed log entry");
      }
      if (j.is_object() && j.contains("session")) {
        const SessionHeader h = parse_header(j);
        if (h.annotator_id != header_.annotator_id)
          throw DataError("annotate: log belongs to annotator '" +
                          h.annotator_id + "'");
        if (h.dataset_hash != header_.dataset_hash)
          throw DataError("annotate: log was written for a different dataset");
        if (h.shuffle_seed != header_.shuffle_seed)
          throw DataError("annotate: log was written with another shuffle seed");
        saw_header = true;
        continue;
      }
      if (!saw_header)
        throw DataError("annotate: log " + log_path_.string() +
                        " lacks a session header");
      const auto recs = parse_annotations(line);
      for (const auto& rec : recs) {
        if (rec.annotator_id != header_.annotator_id)
          throw DataError("annotate: log holds a record by '" +
                          rec.annotator_id + "'");
        if (!index.count(rec.instance_id))
          throw DataError("annotate: log labels unknown instance '" +
                          rec.instance_id + "'");
        if (labeled_.insert(rec.instance_id).second) records_.push_back(rec);
      }
    }
  }

  log_.open(log_path_, std::ios::app | std::ios::binary);
  if (!log_) {
    throw DataError("annotate: cannot write log " + log_path_.string());
  }
  if (needs_newline) log_ << '\n';
  if (fresh) {
    log_ << header_line(header_) << '\n';
    log_.flush();
    if (!log_)
      throw DataError("annotate: cannot write log " + log_path_.string());
  }

  queue_.resize(dataset_.size());
  std::iota(queue_.begin(), queue_.end(), 0);
  if (shuffle_seed) seeded_shuffle(queue_, *shuffle_seed);
  advance_past_labeled();
}

void AnnotationSession::advance_past_labeled() {
  while (cursor_ < queue_.size() &&
         labeled_.count(dataset_[queue_[cursor_]].id)) {
    ++cursor_;
  }
}

const Instance* AnnotationSession::current() const {
  return cursor_ < queue_.size() ? &dataset_[queue_[cursor_]] : nullptr;
}

std::size_t AnnotationSession::remaining() const {
  std::size_t n = 0;
  for (std::size_t i = cursor_; i < queue_.size(); ++i)
    n += !labeled_.count(dataset_[queue_[i]].id);
  return n;
}

void AnnotationSession::label(VoteLabel label) {
  const Instance* inst = current();
  if (!inst) throw DataError("annotate: no instance left to label");
  AnnotationRecord rec{inst->id, header_.annotator_id, label};
  log_ << annotation_to_json_line(rec) << '\n';
  log_.flush();
  if (!log_) throw DataError("annotate: write to " + log_path_.string() +
                             " failed");
  labeled_.insert(rec.instance_id);
  records_.push_back(std::move(rec));
  ++cursor_;
  advance_past_labeled();
}

void AnnotationSession::skip() {
  if (!current()) return;
  ++cursor_;
  advance_past_labeled();
}

void AnnotationSession::run(std::istream& in, std::ostream& out) {
  out << guideline_text() << '\n';
  while (const Instance* inst = current()) {
    out << "[" << (position() + 1) << "/" << queue_size() << "] " << inst->id
        << "\n\nSOURCE:\n" << inst->source << "\n\nHEADLINE:\n"
        << inst->headline << "\n\n";
    for (;;) {
      out << "label? [e]ntail [n]on-entail [i]ncomprehensible [s]kip [q]uit "
             "[?]guideline > "
          << std::flush;
      std::string line;
      if (!std::getline(in, line)) return;
      const auto b = line.find_first_not_of(" \t\r");
      const auto e = line.find_last_not_of(" \t\r");
      const std::string cmd =
          b == std::string::npos ? "" : to_lower(line.substr(b, e - b + 1));
      if (cmd == "e" || cmd == "entail") {
        label(VoteLabel::kEntail);
      } else if (cmd == "n" || cmd == "non_entail" || cmd == "non-entail") {
        label(VoteLabel::kNonEntail);
      } else if (cmd == "i" || cmd == "incomprehensible") {
        label(VoteLabel::kIncomprehensible);
      } else if (cmd == "s" || cmd == "skip") {
        skip();
      } else if (cmd == "q" || cmd == "quit") {
        return;
      } else if (cmd == "?") {
        out << '\n' << guideline_text() << '\n';
        continue;
      } else {
        out << "unrecognized input '" << cmd << "'\n";
        continue;
      }
      out << '\n';
      break;
    }
  }
  out << "all instances labeled\n";
}

std::vector<AnnotationRecord> run_session(
    const Dataset& dataset, const std::string& annotator_id,
    const std::filesystem::path& log_path, std::istream& in, std::ostream& out,
    std::optional<std::uint64_t> shuffle_seed) {
  AnnotationSession session(dataset, annotator_id, log_path, shuffle_seed);
  session.run(in, out);
  return session.records();
}

AgreementReport agreement(const std::vector<AnnotationRecord>& records) {
  std::map<std::string, std::vector<VoteLabel>> by_instance;
  for (const auto& r : records) by_instance[r.instance_id].push_back(r.label);
  AgreementReport report;
  std::size_t agreeing = 0;
  for (const auto& [id, labels] : by_instance) {
    if (labels.size() < 2) {
      report.excluded.push_back(id);
      continue;
    }
    bool unanimous = true;
    for (std::size_t a = 0; a < labels.size(); ++a) {
      for (std::size_t b = a + 1; b < labels.size(); ++b) {
        ++report.pairs;
        if (labels[a] == labels[b]) {
          ++agreeing;
        } else {
          unanimous = false;
        }
      }
    }
    report.per_instance.push_back({id, unanimous});
  }
  if (report.pairs > 0)
    report.raw_agreement = static_cast<double>(agreeing) / report.pairs;
  return report;
}

}  // namespace hltruth
