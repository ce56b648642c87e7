// Copyright 2026 The ctiguard Authors
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

#include "ctiguard/corpus.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ctiguard/errors.h"
#include "ctiguard/ioc_detect.h"
#include "ctiguard/text.h"

namespace ctiguard {

using ordered_json = nlohmann::ordered_json;

const Record* Corpus::find(std::string_view id) const {
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

namespace {

std::string line_prefix(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

std::string required_string(const ordered_json& obj, const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw ParseError(line_prefix(line) + "missing field '" + field + "'");
  }
  if (!it->is_string()) {
    throw ParseError(line_prefix(line) + "field '" + field + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

Corpus parse_corpus(std::string_view jsonl, std::string source) {
  Corpus corpus;
  corpus.source = std::move(source);
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    std::string_view line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (text::trim(line).empty()) {
      if (nl == jsonl.size()) break;
      continue;
    }
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_prefix(line_no) + "malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw ParseError(line_prefix(line_no) + "expected a JSON object");
    Record r;
    r.id = required_string(obj, "id", line_no);
    r.prompt = required_string(obj, "prompt", line_no);
    r.response = required_string(obj, "response", line_no);
    r.line = line_no;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it.key() != "id" && it.key() != "prompt" && it.key() != "response") {
        r.extras[it.key()] = it.value().dump();
      }
    }
    if (text::trim(r.id).empty()) throw ValidationError(line_prefix(line_no) + "empty id");
    if (text::trim(r.prompt).empty()) {
      throw ValidationError(line_prefix(line_no) + "prompt is empty");
    }
    if (text::trim(r.response).empty()) {
      throw ValidationError(line_prefix(line_no) + "response is empty");
    }
    auto [it, inserted] = seen.emplace(r.id, line_no);
    if (!inserted) {
      throw ValidationError(line_prefix(line_no) + "duplicate id '" + r.id +
                            "' (first seen on line " + std::to_string(it->second) + ")");
    }
    corpus.records.push_back(std::move(r));
    if (nl == jsonl.size()) break;
  }
  if (corpus.records.empty()) {
    throw ValidationError("corpus " + corpus.source + " contains no records");
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read corpus " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str(), path.string());
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& r : corpus.records) {
    ordered_json obj;
    obj["id"] = r.id;
    obj["prompt"] = r.prompt;
    obj["response"] = r.response;
    for (const auto& [k, v] : r.extras) obj[k] = ordered_json::parse(v);
    out << obj.dump() << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_corpus(corpus, out);
}

std::string manifest_to_json(const Corpus& corpus) {
  ordered_json doc;
  doc["source"] = corpus.source;
  if (corpus.seed) {
    doc["seed"] = *corpus.seed;
  } else {
    doc["seed"] = nullptr;
  }
  doc["entities"] = ordered_json::array();
  for (const auto& p : corpus.manifest) {
    doc["entities"].push_back({{"record_id", p.record_id},
                               {"kind", std::string(to_string(p.kind))},
                               {"canonical", p.canonical},
                               {"surface", p.surface},
                               {"obfuscated", p.obfuscated}});
  }
  return doc.dump(2);
}

std::vector<PlantedEntity> manifest_from_json(std::string_view json) {
  std::vector<PlantedEntity> out;
  try {
    auto doc = nlohmann::json::parse(json);
    for (const auto& e : doc.at("entities")) {
      auto kind = entity_kind_from_string(e.at("kind").get<std::string>());
      if (!kind) throw ParseError("manifest: unknown kind " + e.at("kind").dump());
      out.push_back({e.at("record_id").get<std::string>(), *kind,
                     e.at("canonical").get<std::string>(),
                     e.value("surface", e.at("canonical").get<std::string>()),
                     e.value("obfuscated", false)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------

SensitiveInventory::SensitiveInventory() {
  for (EntityKind k : kAllEntityKinds) sets_[k];
}

void SensitiveInventory::add(EntityKind kind, std::string normalized) {
  sets_[kind].insert(std::move(normalized));
}

const std::set<std::string>& SensitiveInventory::at(EntityKind kind) const {
  return sets_.at(kind);
}

std::size_t SensitiveInventory::total() const {
  std::size_t n = 0;
  for (const auto& [k, s] : sets_) n += s.size();
  return n;
}

bool SensitiveInventory::contains(EntityKind kind, const std::string& normalized) const {
  return at(kind).count(normalized) > 0;
}

SensitiveInventory build_inventory(const Corpus& corpus, const ioc::Scanner& scanner) {
  SensitiveInventory inv;
  for (const auto& r : corpus.records) {
    for (const auto* field : {&r.prompt, &r.response}) {
      for (auto& span : scanner.scan(*field)) inv.add(span.kind, std::move(span.normalized));
    }
  }
  return inv;
}

SensitiveInventory inventory_from_manifest(const std::vector<PlantedEntity>& manifest) {
  SensitiveInventory inv;
  for (const auto& p : manifest) inv.add(p.kind, p.canonical);
  return inv;
}

std::string inventory_to_json(const SensitiveInventory& inventory) {
  ordered_json doc;
  ordered_json counts;
  ordered_json sets;
  for (EntityKind k : kAllEntityKinds) {
    std::string name(to_string(k));
    counts[name] = inventory.count(k);
    sets[name] = inventory.at(k);
  }
  doc["counts"] = counts;
  doc["entities"] = sets;
  return doc.dump(2);
}

SensitiveInventory inventory_from_json(std::string_view json) {
  SensitiveInventory inv;
  try {
    auto doc = nlohmann::json::parse(json);
    for (auto it = doc.at("entities").begin(); it != doc.at("entities").end(); ++it) {
      auto kind = entity_kind_from_string(it.key());
      if (!kind) throw ParseError("inventory: unknown kind '" + it.key() + "'");
      for (const auto& v : it.value()) inv.add(*kind, v.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("inventory: ") + e.what());
  }
  return inv;
}

}  // namespace ctiguard
