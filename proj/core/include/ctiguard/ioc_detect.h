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

// Obfuscation-aware detection of IPs, emails, ports, domains and software
// versions in free text.
//
// Scanning works on a "refanged" view of the input: every defang rule in the
// catalog (`[.]`, `(at)`, `_dot_`, `hxxp://`, ...) is replaced by its
// canonical token, and each byte of the view remembers the source range it
// came from. Canonical matchers run over the view and matches are mapped back
// to byte offsets in the original text, so a span's `raw` is always the exact
// obfuscated substring while `normalized` is the canonical entity.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctiguard/entity.h"

namespace ctiguard::ioc {

enum class RuleStyle {
  /// Plain substring replacement, matched case-insensitively.
  kLiteral,
  /// `_word_` forms. Adjacent rules may share one underscore, so
  /// `user_at_host_dot_com` reads as `user@host.com`.
  kUnderscoreWord,
};

struct DefangRule {
  std::string pattern_class;  // e.g. "bracketed-dot"
  std::string pattern;        // e.g. "[.]"
  std::string replacement;    // e.g. "."
  RuleStyle style = RuleStyle::kLiteral;
};

/// Defang rules plus the TLD list used for domain recognition. Immutable once
/// handed to a Scanner.
class RuleCatalog {
 public:
  static RuleCatalog builtin();
  /// Builtin catalog extended with a JSON file of the form
  /// {"rules": [{"class", "pattern", "replacement", "style"}], "tlds": [...]}.
  static RuleCatalog from_file(const std::filesystem::path& path);
  static RuleCatalog from_json(std::string_view json);

  void add_rule(DefangRule rule);
  void add_tld(std::string_view tld);

  const std::vector<DefangRule>& rules() const { return rules_; }
  const std::set<std::string, std::less<>>& tlds() const { return tlds_; }

  /// Case-insensitive, but Title-case labels ("Net") are rejected since they
  /// are almost always a sentence start after a missing space.
  bool is_tld(std::string_view label) const;

 private:
  std::vector<DefangRule> rules_;  // longest pattern first
  std::set<std::string, std::less<>> tlds_;
};

/// Refanged text with a byte map back into the source.
struct RefangedText {
  std::string text;
  std::vector<std::size_t> source_begin;
  std::vector<std::size_t> source_end;
  std::vector<bool> rewritten;  // byte produced by a defang rule

  std::pair<std::size_t, std::size_t> to_source(std::size_t begin,
                                                std::size_t end) const;
  bool any_rewritten(std::size_t begin, std::size_t end) const;
};

RefangedText refang(std::string_view text, const RuleCatalog& catalog);

/// A prompt that stops in the middle of an entity ("... used 154.198.").
struct PartialEntity {
  EntityKind kind;
  std::string fragment;
};

class Scanner {
 public:
  Scanner();
  explicit Scanner(RuleCatalog catalog);

  /// All maximal non-overlapping entity spans, sorted by start offset.
  std::vector<EntitySpan> scan(std::string_view text) const;

  /// Canonical form of a candidate string. Idempotent. Throws
  /// NormalizationError naming the violated rule.
  std::string normalize(std::string_view raw, EntityKind kind) const;

  /// Detects a trailing entity fragment that invites completion: partial
  /// IPv4 octet runs, `local@` or `@domain` email halves, and URLs or `www.`
  /// hosts without a recognizable TLD.
  std::optional<PartialEntity> trailing_partial(std::string_view text) const;

  const RuleCatalog& catalog() const { return catalog_; }

 private:
  RuleCatalog catalog_;
};

/// Removes each span together with list separators, enclosing quotes and a
/// stranded leading connective ("at", "to", "via", "including", ...), then
/// repairs whitespace and punctuation at the seams. Text without spans is
/// returned unchanged.
std::string elide_spans(std::string_view text, std::span<const EntitySpan> spans);

/// Repeats scan + elide_spans until the scanner finds nothing. `removed`
/// collects every span taken out, in offsets of the text it was found in.
std::string elide_all(const Scanner& scanner, std::string_view text,
                      std::vector<EntitySpan>* removed = nullptr);

}  // namespace ctiguard::ioc
