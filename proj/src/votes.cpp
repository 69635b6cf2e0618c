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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hltruth/corpus.hpp"
#include "hltruth/error.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"

namespace hltruth {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(VoteLabel label) {
  switch (label) {
    case VoteLabel::kEntail:
      return "entail";
    case VoteLabel::kNonEntail:
      return "non_entail";
    case VoteLabel::kIncomprehensible:
      return "incomprehensible";
  }
  return "unknown";
}

std::string_view to_string(AggregateLabel label) {
  switch (label) {
    case AggregateLabel::kEntail:
      return "entail";
    case AggregateLabel::kNonEntail:
      return "non_entail";
    case AggregateLabel::kUndecided:
      return "undecided";
  }
  return "unknown";
}

VoteLabel parse_vote_label(std::string_view name) {
  if (name == "entail") return VoteLabel::kEntail;
  if (name == "non_entail") return VoteLabel::kNonEntail;
  if (name == "incomprehensible" || name == "other")
    return VoteLabel::kIncomprehensible;
  throw DataError("unknown annotation label '" + std::string(name) + "'");
}

AggregateLabel parse_aggregate_label(std::string_view name) {
  if (name == "entail") return AggregateLabel::kEntail;
  if (name == "non_entail") return AggregateLabel::kNonEntail;
  if (name == "undecided") return AggregateLabel::kUndecided;
  throw DataError("unknown aggregated label '" + std::string(name) + "'");
}

std::vector<AnnotationRecord> parse_annotations(std::string_view text) {
  std::vector<AnnotationRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json obj = json::parse(line);
      if (!obj.is_object()) throw DataError("expected a JSON object");
      if (obj.contains("session")) continue;
      AnnotationRecord rec;
      rec.instance_id = obj.at("instance_id").get<std::string>();
      rec.annotator_id = obj.at("annotator_id").get<std::string>();
      rec.label = parse_vote_label(obj.at("label").get<std::string>());
      if (rec.instance_id.empty() || rec.annotator_id.empty())
        throw DataError("empty instance_id or annotator_id");
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw DataError("annotations line " + std::to_string(line_no) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError("annotations line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return out;
}

std::vector<AnnotationRecord> read_annotations(
    const std::filesystem::path& path) {
  try {
    return parse_annotations(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string annotation_to_json_line(const AnnotationRecord& record) {
  ordered_json obj;
  obj["instance_id"] = record.instance_id;
  obj["annotator_id"] = record.annotator_id;
  obj["label"] = to_string(record.label);
  return obj.dump();
}

MajorityRule MajorityRule::parse(std::string_view text) {
  const auto of = text.find("of");
  MajorityRule rule;
  try {
    if (of == std::string_view::npos || of == 0 || of + 2 >= text.size())
      throw std::invalid_argument("shape");
    std::size_t used = 0;
    const std::string agree(text.substr(0, of));
    const std::string panel(text.substr(of + 2));
    rule.min_agree = std::stoi(agree, &used);
    if (used != agree.size()) throw std::invalid_argument("agree");
    rule.panel_size = std::stoi(panel, &used);
    if (used != panel.size()) throw std::invalid_argument("panel");
  } catch (const std::logic_error&) {
    throw DataError("majority rule must look like '2of3', got '" +
                    std::string(text) + "'");
  }
  if (rule.panel_size < 1 || rule.min_agree < 1 ||
      rule.min_agree > rule.panel_size || 2 * rule.min_agree <= rule.panel_size) {
    throw DataError("majority rule '" + std::string(text) +
                    "' needs panel_size >= min_agree > panel_size / 2");
  }
  return rule;
}

std::string MajorityRule::to_string() const {
  return std::to_string(min_agree) + "of" + std::to_string(panel_size);
}

std::vector<AggregatedLabel> aggregate_votes(
    const std::vector<AnnotationRecord>& records, const MajorityRule& rule) {
  if (rule.panel_size < 1 || 2 * rule.min_agree <= rule.panel_size ||
      rule.min_agree > rule.panel_size) {
    throw DataError("invalid majority rule " + rule.to_string());
  }
  struct Tally {
    int entail = 0;
    int non_entail = 0;
    int total = 0;
  };
  std::map<std::string, Tally> tallies;
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const auto& rec : records) {
    if (!seen.emplace(rec.instance_id, rec.annotator_id).second) {
      throw DataError("annotator '" + rec.annotator_id +
                      "' labeled instance '" + rec.instance_id + "' twice");
    }
    Tally& t = tallies[rec.instance_id];
    ++t.total;
    if (rec.label == VoteLabel::kEntail) ++t.entail;
    if (rec.label == VoteLabel::kNonEntail) ++t.non_entail;
    if (t.total > rule.panel_size) {
      throw DataError("instance '" + rec.instance_id + "' has more than " +
                      std::to_string(rule.panel_size) + " records");
    }
  }
  std::vector<AggregatedLabel> out;
  out.reserve(tallies.size());
  for (const auto& [id, t] : tallies) {
    AggregatedLabel agg;
    agg.instance_id = id;
    agg.votes_total = t.total;
    if (t.entail >= rule.min_agree) {
      agg.label = AggregateLabel::kEntail;
      agg.votes_for = t.entail;
    } else if (t.non_entail >= rule.min_agree) {
      agg.label = AggregateLabel::kNonEntail;
      agg.votes_for = t.non_entail;
    } else {
      agg.label = AggregateLabel::kUndecided;
      agg.votes_for = std::max(t.entail, t.non_entail);
    }
    out.push_back(std::move(agg));
  }
  return out;
}

std::string serialize_aggregated(const std::vector<AggregatedLabel>& labels) {
  std::string out;
  for (const auto& a : labels) {
    ordered_json obj;
    obj["instance_id"] = a.instance_id;
    obj["label"] = to_string(a.label);
    obj["votes_for"] = a.votes_for;
    obj["votes_total"] = a.votes_total;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<AggregatedLabel> parse_aggregated(std::string_view text) {
  std::vector<AggregatedLabel> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      AggregatedLabel a;
      a.instance_id = obj.at("instance_id").get<std::string>();
      a.label = parse_aggregate_label(obj.at("label").get<std::string>());
      a.votes_for = obj.at("votes_for").get<int>();
      a.votes_total = obj.at("votes_total").get<int>();
      if (a.votes_for < 0 || a.votes_for > a.votes_total)
        throw DataError("votes_for must be within [0, votes_total]");
      out.push_back(std::move(a));
    } catch (const json::exception& e) {
      throw DataError("aggregated line " + std::to_string(line_no) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError("aggregated line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return out;
}

EntailRatio entail_ratio(const std::vector<AggregatedLabel>& labels) {
  EntailRatio r;
  for (const auto& a : labels) {
    switch (a.label) {
      case AggregateLabel::kEntail:
        ++r.entail;
        break;
      case AggregateLabel::kNonEntail:
        ++r.non_entail;
        break;
      case AggregateLabel::kUndecided:
        ++r.undecided;
        break;
    }
  }
  const std::size_t all = r.entail + r.non_entail + r.undecided;
  const std::size_t decided = r.entail + r.non_entail;
  if (all > 0) r.ratio_all = static_cast<double>(r.entail) / all;
  if (decided > 0) r.ratio_decided = static_cast<double>(r.entail) / decided;
  return r;
}

}  // namespace hltruth
