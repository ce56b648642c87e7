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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ctiguard/entity.h"

namespace ctiguard {

namespace ioc {
class Scanner;
}

struct Record {
  std::string id;
  std::string prompt;
  std::string response;
  /// Unknown JSON members, kept as serialized JSON values for round-trips.
  std::map<std::string, std::string> extras;
  std::size_t line = 0;  // 1-based source line, 0 if not from a file

  /// "prompt response", the text a model is trained on.
  std::string text() const { return prompt + " " + response; }
};

/// One entity planted by the synthetic generator.
struct PlantedEntity {
  std::string record_id;
  EntityKind kind;
  std::string canonical;
  std::string surface;  // as written in the record, possibly defanged
  bool obfuscated = false;
};

struct Corpus {
  std::vector<Record> records;
  std::string source;  // file path or "synthetic"
  std::optional<std::uint64_t> seed;
  std::vector<PlantedEntity> manifest;  // empty unless synthetic

  const Record* find(std::string_view id) const;
};

/// Reads a JSON-lines corpus. Blank lines are skipped.
/// Throws ParseError (with the line number) or ValidationError.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl, std::string source);

void write_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Plant manifest as JSON: {"seed", "entities": [{record_id, kind, ...}]}.
std::string manifest_to_json(const Corpus& corpus);
std::vector<PlantedEntity> manifest_from_json(std::string_view json);

struct SyntheticOptions {
  std::uint64_t seed = 7;
  std::size_t records_per_category = 2;
  std::size_t entities_per_category = 2;
  /// Share of IP, email and domain entities written in defanged form.
  double obfuscation_fraction = 0.3;
};

/// Deterministic CTI-style QA corpus where each record's response carries
/// exactly one planted entity. Every record has its own operation codename
/// so that each record's continuation is uniquely determined by its prefix.
Corpus generate_synthetic_corpus(const SyntheticOptions& options);
Corpus generate_synthetic_corpus(std::uint64_t seed, std::size_t records_per_category,
                                 std::size_t entities_per_category);

/// Per-category sets of normalized entities.
class SensitiveInventory {
 public:
  SensitiveInventory();

  void add(EntityKind kind, std::string normalized);
  const std::set<std::string>& at(EntityKind kind) const;
  std::size_t count(EntityKind kind) const { return at(kind).size(); }
  std::size_t total() const;
  bool contains(EntityKind kind, const std::string& normalized) const;

  bool operator==(const SensitiveInventory& other) const = default;

 private:
  std::map<EntityKind, std::set<std::string>> sets_;
};

/// Scans prompt and response of every record and unions the normalized hits.
SensitiveInventory build_inventory(const Corpus& corpus, const ioc::Scanner& scanner);
SensitiveInventory inventory_from_manifest(const std::vector<PlantedEntity>& manifest);

std::string inventory_to_json(const SensitiveInventory& inventory);
SensitiveInventory inventory_from_json(std::string_view json);

}  // namespace ctiguard
