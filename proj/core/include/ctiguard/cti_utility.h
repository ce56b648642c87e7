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


// Utility scoring for CTI answers: CVE/CWE mapping checks and technique
// matching relaxed to shared threat groups.

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ctiguard::cti {

enum class SeverityBand { kNone, kLow, kMedium, kHigh, kCritical };

std::string_view to_string(SeverityBand band);
/// CVSS v3 qualitative rating of a base score in [0, 10].
SeverityBand band_for_score(double score);

struct CveEntry {
  std::string cwe;
  std::string pillar;
  double base_severity = 0;
  SeverityBand band = SeverityBand::kNone;
};

class CveMappingTable {
 public:
  /// {"cves": {"CVE-...": {cwe, pillar, base_severity}}, "cwes": {"CWE-...": pillar}}
  /// "cwes" is optional; CWE pillars are also taken from the CVE rows.
  static CveMappingTable from_json(std::string_view json);
  static CveMappingTable load(const std::filesystem::path& path);

  void add_cve(const std::string& cve, CveEntry entry);
  void add_cwe(const std::string& cwe, const std::string& pillar);

  const CveEntry* cve(const std::string& id) const;
  const std::string* cwe_pillar(const std::string& id) const;
  std::size_t size() const { return cves_.size(); }

 private:
  std::map<std::string, CveEntry> cves_;
  std::map<std::string, std::string> cwe_pillars_;
};

class TechniqueGroupTable {
 public:
  /// {"T1105": ["G0130", ...], ...}
  static TechniqueGroupTable from_json(std::string_view json);
  static TechniqueGroupTable load(const std::filesystem::path& path);

  void add(const std::string& technique, std::set<std::string> groups);
  const std::set<std::string>* groups(const std::string& technique) const;
  const std::map<std::string, std::set<std::string>>& all() const { return map_; }

 private:
  std::map<std::string, std::set<std::string>> map_;
};

bool is_cve_id(std::string_view s);
bool is_cwe_id(std::string_view s);
bool is_technique_id(std::string_view s);

struct ExtractedIds {
  std::vector<std::string> cves;
  std::vector<std::string> cwes;
  std::vector<std::string> techniques;
};

/// Shape-based, first-seen order, deduplicated. Technique ids keep an
/// optional ".NNN" sub-technique suffix.
ExtractedIds extract_ids(std::string_view text);

enum class MappingMetric {
  kDirectCve,          // (a)
  kDirectCwe,          // (b)
  kCveToCwe,           // (c)
  kCveToPillar,        // (d)
  kCweToPillar,        // (e)
  kCvePillarCrossed,   // (f)
  kSeverity,           // (g)
};
inline constexpr std::size_t kMappingMetricCount = 7;
std::string_view to_string(MappingMetric metric);

struct MappingOutcome {
  std::array<bool, kMappingMetricCount> flags{};
  /// "metric:not-in-table:ID" or "metric:missing-id:generated|expected".
  std::vector<std::string> annotations;
  std::size_t not_in_table = 0;

  bool flag(MappingMetric m) const { return flags[static_cast<std::size_t>(m)]; }
};

/// The generated answer's CWE is the first one it names. The expected
/// answer's CWE is the one it names, else the table CWE of its CVE.
MappingOutcome evaluate_mapping(std::string_view generated, std::string_view expected,
                                const CveMappingTable& table);

struct GroupMatch {
  bool match = false;
  std::optional<std::string> annotation;
};

/// True iff both techniques are in the table and their group sets intersect.
GroupMatch group_overlap_match(const std::string& generated, const std::string& actual,
                               const TechniqueGroupTable& table);

}  // namespace ctiguard::cti
