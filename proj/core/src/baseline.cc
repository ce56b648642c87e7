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


#include "ctiguard/baseline.h"

#include <algorithm>
#include <regex>
#include <set>

#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard::baseline {
namespace {

struct Pattern {
  EntityKind kind;
  std::regex re;
  int group = 0;      // capture group that holds the entity
  bool numeric = false;  // reject when glued to neighbouring digits or dots
  bool trim_punct = false;
};

const std::string kTlds =
    "(?:com|net|org|io|info|biz|gov|edu|mil|ru|cn|uk|de|fr|jp|kr|in|br|co|me|xyz|top|online|site)";
const std::string kOctet = "(?:25[0-5]|2[0-4][0-9]|1[0-9]{2}|[1-9]?[0-9])";
const std::string kDotSep = R"((?:\.|\[\.\]|\(\.\)|\{\.\}|\[dot\]|\(dot\)|\{dot\}))";
const std::string kAtSep = R"((?:@|\[at\]|\(at\)|\{at\}|\[@\]|\(@\)|\{@\}|_at_))";

constexpr auto kIcase = std::regex::ECMAScript | std::regex::icase;

std::vector<Pattern> canonical_patterns() {
  std::vector<Pattern> p;
  p.push_back({EntityKind::kDomainName, std::regex(R"((?:https?|ftp)://[^\s<>"'()\[\]{}]+)", kIcase),
               0, false, true});
  p.push_back({EntityKind::kEmailAddress,
               std::regex(R"([A-Za-z0-9._%+\-]+@[A-Za-z0-9\-]+(?:\.[A-Za-z0-9\-]+)*\.[A-Za-z]{2,})"),
               0, false, false});
  p.push_back({EntityKind::kIpAddress,
               std::regex(kOctet + R"(\.)" + kOctet + R"(\.)" + kOctet + R"(\.)" + kOctet), 0, true,
               false});
  p.push_back({EntityKind::kDomainName,
               std::regex(R"((?:[A-Za-z0-9](?:[A-Za-z0-9\-]*[A-Za-z0-9])?\.)+)" + kTlds + R"(\b)",
                          kIcase),
               0, false, false});
  p.push_back({EntityKind::kPortNumber, std::regex(R"(\bports?\s+(?:number\s+)?([0-9]{1,5})\b)", kIcase),
               1, true, false});
  p.push_back({EntityKind::kSoftwareVersion, std::regex(R"([vV]?[0-9]+\.[0-9]+\.[0-9]+)"), 0, true,
               false});
  return p;
}

std::vector<Pattern> extended_only_patterns() {
  std::vector<Pattern> p;
  p.push_back({EntityKind::kDomainName,
               std::regex(R"(hxxps?(?:://|\[://\]|\[:\]//)[^\s<>"'()]+)", kIcase), 0, false, true});
  p.push_back({EntityKind::kIpAddress,
               std::regex(R"([0-9]{1,3}(?:)" + kDotSep + R"([0-9]{1,3}){3})", kIcase), 0, true,
               false});
  p.push_back({EntityKind::kEmailAddress,
               std::regex(R"([A-Za-z0-9._%+\-]+)" + kAtSep + R"((?:[A-Za-z0-9\-]+(?:)" + kDotSep +
                              R"(|_dot_|_))+[A-Za-z]{2,})",
                          kIcase),
               0, false, false});
  p.push_back({EntityKind::kDomainName,
               std::regex(R"((?:[A-Za-z0-9\-]+)" + kDotSep + R"()+)" + kTlds + R"(\b)", kIcase), 0,
               false, false});
  return p;
}

const std::vector<Pattern>& patterns(MaskMode mode) {
  static const std::vector<Pattern> canonical = canonical_patterns();
  static const std::vector<Pattern> extended = [] {
    auto all = canonical_patterns();
    for (auto& p : extended_only_patterns()) all.push_back(std::move(p));
    return all;
  }();
  return mode == MaskMode::kCanonical ? canonical : extended;
}

bool glued(std::string_view s, std::size_t b, std::size_t e, bool numeric) {
  auto alnum = [](char c) { return text::is_alnum(c); };
  if (b > 0 && alnum(s[b - 1]) && alnum(s[b])) return true;
  if (e < s.size() && alnum(s[e - 1]) && alnum(s[e])) return true;
  if (!numeric) return false;
  if (b > 0 && s[b - 1] == '.' ) return true;
  if (e + 1 < s.size() && s[e] == '.' && text::is_digit(s[e + 1])) return true;
  return false;
}

}  // namespace

std::string_view to_string(MaskMode mode) {
  return mode == MaskMode::kCanonical ? "canonical" : "extended";
}

std::optional<MaskMode> mask_mode_from_string(std::string_view s) {
  if (text::iequals(s, "canonical")) return MaskMode::kCanonical;
  if (text::iequals(s, "extended")) return MaskMode::kExtended;
  return std::nullopt;
}

std::map<EntityKind, std::string> MaskPolicy::default_markers() {
  return {{EntityKind::kIpAddress, "<IP_Address>"},
          {EntityKind::kEmailAddress, "<Email_Address>"},
          {EntityKind::kPortNumber, "<Port>"},
          {EntityKind::kDomainName, "<URL>"},
          {EntityKind::kSoftwareVersion, "<Version>"}};
}

void MaskPolicy::validate() const {
  std::set<std::string> seen;
  for (auto kind : kAllEntityKinds) {
    auto it = markers.find(kind);
    if (it == markers.end() || it->second.empty()) {
      throw ValidationError("mask policy: empty marker for " + std::string(to_string(kind)));
    }
    if (!seen.insert(it->second).second) {
      throw ValidationError("mask policy: marker '" + it->second + "' used twice");
    }
  }
}

std::vector<MaskMatch> find_matches(std::string_view text, MaskMode mode) {
  std::vector<MaskMatch> cands;
  std::string s(text);
  for (const auto& p : patterns(mode)) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), p.re); it != std::sregex_iterator();
         ++it) {
      const auto& m = *it;
      auto b = static_cast<std::size_t>(m.position(p.group));
      auto e = b + static_cast<std::size_t>(m.length(p.group));
      if (p.trim_punct) {
        while (e > b && std::string_view(".,;:!?").find(s[e - 1]) != std::string_view::npos) --e;
      }
      if (e <= b || glued(text, b, e, p.numeric)) continue;
      cands.push_back({b, e, p.kind});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const MaskMatch& a, const MaskMatch& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end > b.end;
  });
  std::vector<MaskMatch> merged;
  std::vector<std::size_t> widest;  // width of the candidate that set the kind
  for (const auto& c : cands) {
    if (!merged.empty() && c.start < merged.back().end) {
      if (c.end - c.start > widest.back()) {
        merged.back().kind = c.kind;
        widest.back() = c.end - c.start;
      }
      merged.back().end = std::max(merged.back().end, c.end);
      continue;
    }
    merged.push_back(c);
    widest.push_back(c.end - c.start);
  }
  return merged;
}

std::string mask(std::string_view text, const MaskPolicy& policy) {
  policy.validate();
  std::string out;
  std::size_t pos = 0;
  for (const auto& m : find_matches(text, policy.mode)) {
    out.append(text.substr(pos, m.start - pos));
    out.append(policy.markers.at(m.kind));
    pos = m.end;
  }
  out.append(text.substr(pos));
  return out;
}

metrics::LeakageReport residual_leakage(std::span<const std::string> texts,
                                        const SensitiveInventory& inventory,
                                        const MaskPolicy& policy, const ioc::Scanner& scanner) {
  std::vector<EntitySpan> found;
  for (const auto& t : texts) {
    auto spans = scanner.scan(mask(t, policy));
    found.insert(found.end(), spans.begin(), spans.end());
  }
  return metrics::leakage(found, inventory);
}

}  // namespace ctiguard::baseline
