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


#include "ctiguard/cti_utility.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard::cti {
namespace {

using json = nlohmann::json;

const std::regex kCveRe(R"(^CVE-\d{4}-\d{4,}$)");
const std::regex kCweRe(R"(^CWE-\d+$)");
const std::regex kTechRe(R"(^T\d{4}(\.\d{3})?$)");
const std::regex kGroupRe(R"(^G\d{4}$)");

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse(std::string_view src, const char* what) {
  try {
    return json::parse(src);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

void push_unique(std::vector<std::string>& v, std::string s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(std::move(s));
}

std::string upper(std::string s) {
  for (auto& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

}  // namespace

std::string_view to_string(SeverityBand band) {
  switch (band) {
    case SeverityBand::kNone: return "None";
    case SeverityBand::kLow: return "Low";
    case SeverityBand::kMedium: return "Medium";
    case SeverityBand::kHigh: return "High";
    case SeverityBand::kCritical: return "Critical";
  }
  return "None";
}

SeverityBand band_for_score(double score) {
  if (!(score >= 0.0 && score <= 10.0)) {
    throw ValidationError("base severity " + std::to_string(score) + " outside [0, 10]");
  }
  if (score == 0.0) return SeverityBand::kNone;
  if (score < 4.0) return SeverityBand::kLow;
  if (score < 7.0) return SeverityBand::kMedium;
  if (score < 9.0) return SeverityBand::kHigh;
  return SeverityBand::kCritical;
}

bool is_cve_id(std::string_view s) { return std::regex_match(std::string(s), kCveRe); }
bool is_cwe_id(std::string_view s) { return std::regex_match(std::string(s), kCweRe); }
bool is_technique_id(std::string_view s) { return std::regex_match(std::string(s), kTechRe); }

void CveMappingTable::add_cve(const std::string& cve, CveEntry entry) {
  if (!is_cve_id(cve)) throw ValidationError("cve table: bad CVE id '" + cve + "'");
  if (!is_cwe_id(entry.cwe)) throw ValidationError("cve table: bad CWE id '" + entry.cwe + "'");
  entry.band = band_for_score(entry.base_severity);
  if (!cwe_pillars_.count(entry.cwe)) cwe_pillars_[entry.cwe] = entry.pillar;
  cves_[cve] = std::move(entry);
}

void CveMappingTable::add_cwe(const std::string& cwe, const std::string& pillar) {
  if (!is_cwe_id(cwe)) throw ValidationError("cve table: bad CWE id '" + cwe + "'");
  cwe_pillars_[cwe] = pillar;
}

const CveEntry* CveMappingTable::cve(const std::string& id) const {
  auto it = cves_.find(id);
  return it == cves_.end() ? nullptr : &it->second;
}

const std::string* CveMappingTable::cwe_pillar(const std::string& id) const {
  auto it = cwe_pillars_.find(id);
  return it == cwe_pillars_.end() ? nullptr : &it->second;
}

CveMappingTable CveMappingTable::from_json(std::string_view src) {
  auto j = parse(src, "cve table");
  CveMappingTable t;
  try {
    if (j.contains("cwes")) {
      for (const auto& [id, pillar] : j.at("cwes").items()) t.add_cwe(id, pillar.get<std::string>());
    }
    for (const auto& [id, row] : j.at("cves").items()) {
      CveEntry e;
      e.cwe = row.at("cwe").get<std::string>();
      e.pillar = row.at("pillar").get<std::string>();
      e.base_severity = row.at("base_severity").get<double>();
      t.add_cve(id, e);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("cve table: ") + e.what());
  }
  return t;
}

CveMappingTable CveMappingTable::load(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

void TechniqueGroupTable::add(const std::string& technique, std::set<std::string> groups) {
  if (!is_technique_id(technique)) {
    throw ValidationError("technique table: bad technique id '" + technique + "'");
  }
  if (groups.empty()) throw ValidationError("technique table: " + technique + " has no groups");
  for (const auto& g : groups) {
    if (!std::regex_match(g, kGroupRe)) {
      throw ValidationError("technique table: bad group id '" + g + "'");
    }
  }
  map_[technique] = std::move(groups);
}

const std::set<std::string>* TechniqueGroupTable::groups(const std::string& technique) const {
  auto it = map_.find(technique);
  return it == map_.end() ? nullptr : &it->second;
}

TechniqueGroupTable TechniqueGroupTable::from_json(std::string_view src) {
  auto j = parse(src, "technique table");
  TechniqueGroupTable t;
  try {
    for (const auto& [id, groups] : j.items()) {
      t.add(id, groups.get<std::set<std::string>>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("technique table: ") + e.what());
  }
  return t;
}

TechniqueGroupTable TechniqueGroupTable::load(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

ExtractedIds extract_ids(std::string_view src) {
  static const std::regex re(R"(\b(CVE-\d{4}-\d{4,}|CWE-\d+|T\d{4}(?:\.\d{3})?)\b)",
                             std::regex::ECMAScript | std::regex::icase);
  ExtractedIds out;
  std::string s(src);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
    std::string id = upper((*it)[1].str());
    if (id.rfind("CVE-", 0) == 0) push_unique(out.cves, id);
    else if (id.rfind("CWE-", 0) == 0) push_unique(out.cwes, id);
    else push_unique(out.techniques, id);
  }
  return out;
}

std::string_view to_string(MappingMetric metric) {
  switch (metric) {
    case MappingMetric::kDirectCve: return "direct_cve";
    case MappingMetric::kDirectCwe: return "direct_cwe";
    case MappingMetric::kCveToCwe: return "cve_to_cwe";
    case MappingMetric::kCveToPillar: return "cve_to_pillar";
    case MappingMetric::kCweToPillar: return "cwe_to_pillar";
    case MappingMetric::kCvePillarCrossed: return "actual_vs_generated_cve_pillar";
    case MappingMetric::kSeverity: return "severity";
  }
  return "unknown";
}

MappingOutcome evaluate_mapping(std::string_view generated, std::string_view expected,
                                const CveMappingTable& table) {
  auto g = extract_ids(generated);
  auto x = extract_ids(expected);
  MappingOutcome out;

  auto note = [&](MappingMetric m, const std::string& what) {
    out.annotations.push_back(std::string(to_string(m)) + ":" + what);
    if (what.rfind("not-in-table", 0) == 0) ++out.not_in_table;
  };
  auto set = [&](MappingMetric m, bool v) { out.flags[static_cast<std::size_t>(m)] = v; };

  std::optional<std::string> g_cve, g_cwe, x_cve, x_cwe;
  if (!g.cves.empty()) g_cve = g.cves.front();
  if (!g.cwes.empty()) g_cwe = g.cwes.front();
  if (!x.cves.empty()) x_cve = x.cves.front();
  if (!x.cwes.empty()) x_cwe = x.cwes.front();

  const CveEntry* g_row = g_cve ? table.cve(*g_cve) : nullptr;
  const CveEntry* x_row = x_cve ? table.cve(*x_cve) : nullptr;
  if (!x_cwe && x_row) x_cwe = x_row->cwe;

  // Returns the row, or records why it is unavailable.
  auto need_cve = [&](MappingMetric m, const std::optional<std::string>& id, const CveEntry* row,
                      const char* side) -> const CveEntry* {
    if (!id) {
      note(m, std::string("missing-id:") + side);
      return nullptr;
    }
    if (!row) note(m, "not-in-table:" + *id);
    return row;
  };
  auto need_pillar = [&](MappingMetric m, const std::optional<std::string>& id,
                         const char* side) -> const std::string* {
    if (!id) {
      note(m, std::string("missing-id:") + side);
      return nullptr;
    }
    const std::string* p = table.cwe_pillar(*id);
    if (!p) note(m, "not-in-table:" + *id);
    return p;
  };

  // (a)
  if (g_cve && x_cve) set(MappingMetric::kDirectCve, *g_cve == *x_cve);
  else note(MappingMetric::kDirectCve, g_cve ? "missing-id:expected" : "missing-id:generated");
  // (b)
  if (g_cwe && x_cwe) set(MappingMetric::kDirectCwe, *g_cwe == *x_cwe);
  else note(MappingMetric::kDirectCwe, g_cwe ? "missing-id:expected" : "missing-id:generated");
  // (c)
  if (auto* r = need_cve(MappingMetric::kCveToCwe, x_cve, x_row, "expected")) {
    if (g_cwe) set(MappingMetric::kCveToCwe, r->cwe == *g_cwe);
    else note(MappingMetric::kCveToCwe, "missing-id:generated");
  }
  // (d)
  {
    auto* r = need_cve(MappingMetric::kCveToPillar, g_cve, g_row, "generated");
    auto* p = need_pillar(MappingMetric::kCveToPillar, g_cwe, "generated");
    if (r && p) set(MappingMetric::kCveToPillar, r->pillar == *p);
  }
  // (e)
  {
    auto* pg = need_pillar(MappingMetric::kCweToPillar, g_cwe, "generated");
    auto* px = need_pillar(MappingMetric::kCweToPillar, x_cwe, "expected");
    if (pg && px) set(MappingMetric::kCweToPillar, *pg == *px);
  }
  // (f)
  {
    auto* rx = need_cve(MappingMetric::kCvePillarCrossed, x_cve, x_row, "expected");
    auto* rg = need_cve(MappingMetric::kCvePillarCrossed, g_cve, g_row, "generated");
    if (rx && rg) set(MappingMetric::kCvePillarCrossed, rx->pillar == rg->pillar);
  }
  // (g)
  {
    auto* rx = need_cve(MappingMetric::kSeverity, x_cve, x_row, "expected");
    auto* rg = need_cve(MappingMetric::kSeverity, g_cve, g_row, "generated");
    if (rx && rg) set(MappingMetric::kSeverity, rx->band == rg->band);
  }
  return out;
}

GroupMatch group_overlap_match(const std::string& generated, const std::string& actual,
                               const TechniqueGroupTable& table) {
  const auto* a = table.groups(generated);
  const auto* b = table.groups(actual);
  if (!a || !b) {
    return {false, "not-in-table:" + (a ? actual : generated)};
  }
  for (const auto& g : *a) {
    if (b->count(g)) return {true, std::nullopt};
  }
  return {false, "disjoint-groups:" + generated + "/" + actual};
}

}  // namespace ctiguard::cti
