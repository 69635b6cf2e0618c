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

#include "hltruth/corpus.hpp"

#include <sstream>
#include <unordered_map>

#include "hltruth/error.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"

namespace hltruth {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

std::string_view to_string(Origin origin) {
  return origin == Origin::kPseudo ? "pseudo" : "natural";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw DataError("unknown split '" + std::string(name) + "'");
}

Origin parse_origin(std::string_view name) {
  if (name == "natural") return Origin::kNatural;
  if (name == "pseudo") return Origin::kPseudo;
  throw DataError("unknown origin '" + std::string(name) + "'");
}

std::string_view to_string(Format format) {
  return format == Format::kTsv ? "tsv" : "jsonl";
}

Format parse_format(std::string_view name) {
  if (name == "jsonl") return Format::kJsonl;
  if (name == "tsv") return Format::kTsv;
  throw DataError("unknown format '" + std::string(name) + "'");
}

Format format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? Format::kTsv : Format::kJsonl;
}

std::string escape_tsv_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string unescape_tsv_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 == field.size()) {
      out.push_back(field[i]);
      continue;
    }
    const char next = field[++i];
    switch (next) {
      case 't':
        out.push_back('\t');
        break;
      case 'n':
        out.push_back('\n');
        break;
      case 'r':
        out.push_back('\r');
        break;
      case '\\':
        out.push_back('\\');
        break;
      default:
        // Unknown escapes pass through untouched.
        out.push_back('\\');
        out.push_back(next);
    }
  }
  return out;
}

namespace {

// Iterates lines with 1-based numbers; strips a trailing '\r'.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    pos = eol + 1;
  }
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

const std::string& require_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing \"") + key + "\"");
  if (!it->is_string())
    throw DataError(std::string("\"") + key + "\" must be a string");
  return it->get_ref<const std::string&>();
}

Instance instance_from_json(const json& obj, const ReadOptions& options) {
  if (!obj.is_object()) throw DataError("expected a JSON object");
  Instance inst;
  inst.id = require_string(obj, "id");
  inst.source = require_string(obj, "source");
  inst.headline = require_string(obj, "headline");
  if (auto it = obj.find("split"); it != obj.end()) {
    if (!it->is_string()) throw DataError("\"split\" must be a string");
    inst.split = parse_split(it->get_ref<const std::string&>());
  } else if (options.default_split) {
    inst.split = *options.default_split;
  } else {
    throw DataError("missing \"split\"");
  }
  if (auto it = obj.find("origin"); it != obj.end()) {
    if (!it->is_string()) throw DataError("\"origin\" must be a string");
    inst.origin = parse_origin(it->get_ref<const std::string&>());
  }
  if (auto it = obj.find("metadata"); it != obj.end()) {
    if (!it->is_object()) throw DataError("\"metadata\" must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string())
        throw DataError("metadata value for \"" + k + "\" must be a string");
      inst.metadata.emplace(k, v.get<std::string>());
    }
  }
  return inst;
}

Instance instance_from_tsv(std::string_view line, const ReadOptions& options) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  if (fields.size() != 3) {
    throw DataError("expected 3 tab-separated fields, found " +
                    std::to_string(fields.size()));
  }
  Instance inst;
  inst.id = unescape_tsv_field(fields[0]);
  inst.source = unescape_tsv_field(fields[1]);
  inst.headline = unescape_tsv_field(fields[2]);
  inst.split = options.default_split.value_or(Split::kTrain);
  return inst;
}

void validate_instance(const Instance& inst) {
  if (inst.id.empty()) throw DataError("empty id");
  if (inst.origin == Origin::kPseudo &&
      inst.metadata.find(std::string(kGeneratorKey)) == inst.metadata.end()) {
    throw DataError("pseudo instance without a \"generator\" metadata entry");
  }
}

std::string format_line_errors(const std::vector<LineError>& errors,
                               std::size_t limit = 20) {
  std::ostringstream os;
  os << errors.size() << " malformed line(s):";
  for (std::size_t i = 0; i < errors.size() && i < limit; ++i) {
    os << "\n  line " << errors[i].line << ": " << errors[i].message;
  }
  if (errors.size() > limit) os << "\n  ...";
  return os.str();
}

}  // namespace

ReadResult parse_instances(std::string_view text, Format format,
                           const ReadOptions& options) {
  ReadResult result;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    Instance inst;
    try {
      if (format == Format::kJsonl) {
        inst = instance_from_json(json::parse(line), options);
      } else {
        inst = instance_from_tsv(line, options);
      }
      validate_instance(inst);
    } catch (const json::exception& e) {
      result.errors.push_back({line_no, e.what()});
      return;
    } catch (const DataError& e) {
      result.errors.push_back({line_no, e.what()});
      return;
    }
    auto [it, inserted] = seen.emplace(inst.id, line_no);
    if (!inserted) {
      throw DataError("duplicate id '" + inst.id + "' on lines " +
                      std::to_string(it->second) + " and " +
                      std::to_string(line_no));
    }
    result.dataset.push_back(std::move(inst));
  });
  if (!result.errors.empty() && !options.lenient) {
    throw DataError(format_line_errors(result.errors));
  }
  return result;
}

ReadResult read_instances(const std::filesystem::path& path, Format format,
                          const ReadOptions& options) {
  const std::string text = read_file(path);
  try {
    return parse_instances(text, format, options);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string instance_to_json_line(const Instance& inst) {
  ordered_json obj;
  obj["id"] = inst.id;
  obj["source"] = inst.source;
  obj["headline"] = inst.headline;
  obj["split"] = to_string(inst.split);
  obj["origin"] = to_string(inst.origin);
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : inst.metadata) meta[k] = v;
  obj["metadata"] = std::move(meta);
  return obj.dump();
}

std::string serialize_instances(const Dataset& dataset, Format format,
                                const WriteOptions& options) {
  std::string out;
  for (const auto& inst : dataset) {
    if (format == Format::kJsonl) {
      out += instance_to_json_line(inst);
    } else {
      if (!options.allow_lossy_tsv &&
          (inst.origin != Origin::kNatural || !inst.metadata.empty())) {
        throw DataError("instance '" + inst.id +
                        "' carries origin/metadata that TSV cannot hold");
      }
      out += escape_tsv_field(inst.id);
      out += '\t';
      out += escape_tsv_field(inst.source);
      out += '\t';
      out += escape_tsv_field(inst.headline);
    }
    out += '\n';
  }
  return out;
}

void write_instances(const Dataset& dataset, const std::filesystem::path& path,
                     Format format, const WriteOptions& options) {
  write_file(path, serialize_instances(dataset, format, options));
}

void check_unique_ids(const Dataset& dataset) {
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].id.empty())
      throw DataError("empty id at position " + std::to_string(i));
    auto [it, inserted] = seen.emplace(dataset[i].id, i);
    if (!inserted) throw DataError("duplicate id '" + dataset[i].id + "'");
  }
}

std::vector<GeneratedHeadline> parse_generated(std::string_view text) {
  std::vector<GeneratedHeadline> out;
  std::vector<LineError> errors;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    try {
      const json obj = json::parse(line);
      if (!obj.is_object()) throw DataError("expected a JSON object");
      out.push_back({require_string(obj, "id"),
                     require_string(obj, "headline")});
    } catch (const json::exception& e) {
      errors.push_back({line_no, e.what()});
    } catch (const DataError& e) {
      errors.push_back({line_no, e.what()});
    }
  });
  if (!errors.empty()) throw DataError(format_line_errors(errors));
  return out;
}

std::vector<GeneratedHeadline> read_generated(
    const std::filesystem::path& path) {
  try {
    return parse_generated(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace hltruth
