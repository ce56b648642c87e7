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

#include "ctiguard/ioc_detect.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard::ioc {
namespace {

using text::is_alnum;
using text::is_alpha;
using text::is_digit;
using text::is_space;

// Common TLDs. Two-letter codes that are also frequent English words
// (in, it, is, at, be, to, no, me, ...) and file-extension collisions
// (py, pl, sh, md, rs, zip, mov) are left out on purpose.
constexpr std::array kBuiltinTlds = {
    "com",    "net",   "org",    "edu",   "gov",   "mil",    "int",
    "info",   "biz",   "io",     "co",    "tv",    "cc",     "ws",
    "uk",     "ca",    "au",     "de",    "fr",    "es",     "nl",
    "ch",     "se",    "dk",     "fi",    "ru",    "su",     "ua",
    "by",     "kz",    "cn",     "hk",    "tw",    "jp",     "kr",
    "pk",     "bd",    "sg",     "th",    "vn",    "ph",     "ir",
    "iq",     "sy",    "il",    "tr",    "sa",    "ae",     "qa",
    "eg",     "za",    "ng",     "ke",    "br",    "ar",     "mx",
    "cl",     "pe",    "ve",     "ro",    "bg",    "hu",     "cz",
    "gr",     "pt",    "lt",     "lv",    "ee",    "ai",     "ly",
    "gs",     "la",    "xyz",    "top",   "online", "site",  "club",
    "pro",    "name",  "mobi",   "asia",  "tk",    "ml",     "ga",
    "cf",     "gq",    "pw",     "cloud", "app",   "dev",    "tech",
    "space",  "website", "store", "live", "life",  "world",  "today",
    "news",   "link",  "click",  "download", "win", "bid",   "loan",
    "onion",  "lol",   "local",  "lan",   "corp",  "internal", "email",
    "services", "systems", "network", "host", "support", "digital",
};

struct BuiltinRule {
  const char* cls;
  const char* pattern;
  const char* replacement;
  RuleStyle style;
};

constexpr std::array kBuiltinRules = {
    BuiltinRule{"bracketed-dot", "[.]", ".", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-dot", "(.)", ".", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-dot", "{.}", ".", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-dot-word", "[dot]", ".", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-dot-word", "(dot)", ".", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-dot-word", "{dot}", ".", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-at", "[at]", "@", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-at", "(at)", "@", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-at", "{at}", "@", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-at", "[@]", "@", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-at", "(@)", "@", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-at", "{@}", "@", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-colon", "[:]", ":", RuleStyle::kLiteral},
    BuiltinRule{"bracketed-scheme", "[://]", "://", RuleStyle::kLiteral},
    BuiltinRule{"hxxp-scheme", "hxxp://", "http://", RuleStyle::kLiteral},
    BuiltinRule{"hxxp-scheme", "hxxps://", "https://", RuleStyle::kLiteral},
    BuiltinRule{"underscore-at", "_at_", "@", RuleStyle::kUnderscoreWord},
    BuiltinRule{"underscore-dot", "_dot_", ".", RuleStyle::kUnderscoreWord},
};

// Words that mark a nearby dotted numeric as a software version.
bool is_version_cue(std::string_view w) {
  static const std::set<std::string, std::less<>> kCues = {
      "version", "versions", "ver",     "release", "releases", "released",
      "build",   "builds",   "before",  "after",   "prior",    "through",
      "thru",    "until",    "update",  "updates", "updated",  "patch",
      "patched", "firmware", "upgrade", "upgraded", "earlier", "later",
      "since",   "v",        "affected", "fixed",  "vulnerable"};
  return kCues.count(w) > 0;
}

bool is_label_char(char c) { return is_alnum(c) || c == '-'; }
bool is_local_char(char c) {
  return is_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(b, i - b));
      b = i + 1;
    }
  }
  return out;
}

// A URL scheme glued onto the previous token ("...com.http://") ends it.
bool scheme_at(std::string_view v, std::size_t i) {
  for (std::string_view sch : {"http://", "https://", "ftp://"}) {
    if (text::istarts_with(v.substr(std::min(i, v.size())), sch)) return true;
  }
  return false;
}

// Ends a dotted hostname starting at `i` whose last label is a known TLD.
// Labels glued on after the TLD ("example.com.ports") are left out, since
// eliding whatever they belong to would expose the hostname anyway.
std::optional<std::size_t> match_hostname(std::string_view v, std::size_t i,
                                          const RuleCatalog& cat) {
  std::vector<std::pair<std::size_t, std::size_t>> labels;
  std::size_t pos = i;
  while (true) {
    std::size_t j = pos;
    while (j < v.size() && is_label_char(v[j]) && !(j > pos && scheme_at(v, j))) ++j;
    if (j == pos || v[pos] == '-' || v[j - 1] == '-') break;
    labels.emplace_back(pos, j);
    if (j + 1 < v.size() && v[j] == '.' && is_label_char(v[j + 1]) && !scheme_at(v, j + 1)) {
      pos = j + 1;
      continue;
    }
    break;
  }
  for (std::size_t n = labels.size(); n >= 2; --n) {
    auto [b, e] = labels[n - 1];
    if (cat.is_tld(v.substr(b, e - b))) return e;
  }
  return std::nullopt;
}

// Ends a dotted-quad starting at `i`, or nullopt.
std::optional<std::size_t> match_ipv4(std::string_view v, std::size_t i) {
  std::size_t pos = i;
  for (int octet = 0; octet < 4; ++octet) {
    std::size_t j = pos;
    while (j < v.size() && is_digit(v[j]) && j - pos < 4) ++j;
    if (j == pos || j - pos > 3) return std::nullopt;
    if (std::stoi(std::string(v.substr(pos, j - pos))) > 255) return std::nullopt;
    if (octet < 3) {
      if (j >= v.size() || v[j] != '.') return std::nullopt;
      pos = j + 1;
    } else {
      pos = j;
    }
  }
  if (pos < v.size() && (is_alnum(v[pos]) || v[pos] == '_') && !scheme_at(v, pos)) {
    return std::nullopt;
  }
  if (pos + 1 < v.size() && v[pos] == '.' && is_digit(v[pos + 1])) {
    return std::nullopt;
  }
  return pos;
}

// Lowercased alphanumeric words before `b`, nearest first, not crossing a
// sentence end or line break.
std::vector<std::string> preceding_words(std::string_view v, std::size_t b,
                                         std::size_t max_words) {
  std::vector<std::string> out;
  std::size_t i = b;
  while (i > 0 && out.size() < max_words) {
    char c = v[i - 1];
    if (c == '\n') break;
    if ((c == '.' || c == '!' || c == '?') && (i == v.size() || !is_alnum(v[i]))) {
      break;
    }
    if (!is_alnum(c)) {
      --i;
      continue;
    }
    std::size_t j = i;
    while (j > 0 && is_alnum(v[j - 1])) --j;
    std::string_view w = v.substr(j, i - j);
    if (!all_digits(w)) out.push_back(text::lower(w));
    i = j;
  }
  return out;
}

// The word directly before `b`, separated only by spaces; case preserved.
std::string_view immediate_word(std::string_view v, std::size_t b) {
  std::size_t i = b;
  while (i > 0 && (v[i - 1] == ' ' || v[i - 1] == '\t')) --i;
  std::size_t j = i;
  while (j > 0 && is_alnum(v[j - 1])) --j;
  return v.substr(j, i - j);
}

bool is_product_word(std::string_view w) {
  if (w.size() < 2 || !std::all_of(w.begin(), w.end(), is_alpha)) return false;
  return w[0] >= 'A' && w[0] <= 'Z';
}

struct Candidate {
  std::size_t begin;
  std::size_t end;
  EntityKind kind;
  int priority;  // lower wins among equal extents
};

void find_urls(std::string_view v, const RuleCatalog& cat,
               std::vector<Candidate>& out) {
  std::size_t from = 0;
  while (true) {
    std::size_t sep = v.find("://", from);
    if (sep == std::string_view::npos) break;
    from = sep + 3;
    std::size_t s = sep;
    while (s > 0 && is_alpha(v[s - 1])) --s;
    std::string run = text::lower(v.substr(s, sep - s));
    std::string scheme;
    for (std::string_view sch : {"https", "http", "ftp"}) {
      if (run.ends_with(sch)) {
        scheme = sch;
        break;
      }
    }
    if (scheme.empty()) continue;
    s = sep - scheme.size();
    std::size_t h = sep + 3;
    EntityKind kind = EntityKind::kDomainName;
    std::optional<std::size_t> end = match_ipv4(v, h);
    if (end) {
      kind = EntityKind::kIpAddress;
    } else {
      end = match_hostname(v, h, cat);
    }
    if (!end) continue;
    std::size_t e = *end;
    if (e < v.size() && v[e] == ':' && e + 1 < v.size() && is_digit(v[e + 1])) {
      ++e;
      while (e < v.size() && is_digit(v[e])) ++e;
    }
    if (e < v.size() && (v[e] == '/' || v[e] == '?' || v[e] == '#')) {
      while (e < v.size() && !is_space(v[e]) && v[e] != '"' && v[e] != '\'' &&
             v[e] != '<' && v[e] != '>') {
        ++e;
      }
      while (e > *end && std::string_view(".,;:!?)]").find(v[e - 1]) !=
                             std::string_view::npos) {
        --e;
      }
    }
    out.push_back({s, e, kind, 0});
  }
}

void find_emails(std::string_view v, const RuleCatalog& cat,
                 std::vector<Candidate>& out) {
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p] != '@') continue;
    std::size_t l = p;
    while (l > 0 && is_local_char(v[l - 1]) && !(v[l - 1] == '.' && l >= 2 && v[l - 2] == '.')) --l;
    while (l < p && v[l] == '.') ++l;
    if (l == p || v[p - 1] == '.') continue;
    auto end = match_hostname(v, p + 1, cat);
    if (!end) continue;
    out.push_back({l, *end, EntityKind::kEmailAddress, 1});
  }
}

void find_dotted_numerics(std::string_view v, const RefangedText& rf,
                          std::vector<Candidate>& out) {
  std::size_t i = 0;
  while (i < v.size()) {
    if (!is_digit(v[i])) {
      ++i;
      continue;
    }
    bool vprefix = false;
    if (i > 0) {
      char p = v[i - 1];
      if ((p == 'v' || p == 'V') && (i == 1 || !is_alnum(v[i - 2]))) {
        vprefix = true;
      } else if (is_alnum(p) || p == '.' || p == '_' || p == '-') {
        while (i < v.size() && (is_digit(v[i]) || v[i] == '.')) ++i;
        continue;
      }
    }
    std::size_t b = i;
    std::vector<std::string_view> comps;
    std::size_t j = i;
    while (true) {
      std::size_t k = j;
      while (k < v.size() && is_digit(v[k])) ++k;
      comps.push_back(v.substr(j, k - j));
      j = k;
      if (j + 1 < v.size() && v[j] == '.' && is_digit(v[j + 1])) {
        ++j;
        continue;
      }
      break;
    }
    i = j;
    if (j < v.size() && (is_alpha(v[j]) || v[j] == '_') && !scheme_at(v, j)) continue;
    if (comps.size() < 2) continue;

    bool obfuscated = rf.any_rewritten(b, j);
    bool octets = comps.size() == 4 &&
                  std::all_of(comps.begin(), comps.end(), [](std::string_view c) {
                    return c.size() <= 3 && std::stoi(std::string(c)) <= 255;
                  });
    std::size_t span_begin = vprefix ? b - 1 : b;
    if (octets && !vprefix) {
      std::string prev = text::lower(immediate_word(v, b));
      if (obfuscated || !is_version_cue(prev)) {
        out.push_back({b, j, EntityKind::kIpAddress, 2});
      } else {
        out.push_back({b, j, EntityKind::kSoftwareVersion, 2});
      }
      continue;
    }
    if (obfuscated) continue;
    bool cue = vprefix;
    if (!cue) {
      // Whole sentence, not a fixed window: eliding entities in between
      // must not pull a cue into range.
      for (const auto& w : preceding_words(v, b, v.size())) {
        if (is_version_cue(w)) {
          cue = true;
          break;
        }
      }
    }
    if (!cue && comps.size() >= 3) cue = is_product_word(immediate_word(v, b));
    if (cue) out.push_back({span_begin, j, EntityKind::kSoftwareVersion, 2});
  }
}

void find_domains(std::string_view v, const RuleCatalog& cat,
                  std::vector<Candidate>& out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_alnum(v[i])) continue;
    if (i > 0) {
      char p = v[i - 1];
      if (is_label_char(p) || p == '.' || p == '@' || p == '_') continue;
    }
    auto end = match_hostname(v, i, cat);
    if (!end) continue;
    if (*end < v.size() && (v[*end] == '@' || v[*end] == '_')) continue;
    out.push_back({i, *end, EntityKind::kDomainName, 3});
    i = *end;
  }
}

// Digits of a port value at `i`, with word boundaries; returns its end.
std::optional<std::size_t> match_port_digits(std::string_view v, std::size_t i) {
  if (i >= v.size() || !is_digit(v[i])) return std::nullopt;
  if (i > 0 && (is_alnum(v[i - 1]) || v[i - 1] == '.')) return std::nullopt;
  std::size_t e = i;
  while (e < v.size() && is_digit(v[e])) ++e;
  if (e - i > 5) return std::nullopt;
  if (e < v.size() && (is_alpha(v[e]) || v[e] == '_')) return std::nullopt;
  if (e + 1 < v.size() && v[e] == '.' && is_digit(v[e + 1])) return std::nullopt;
  if (std::stol(std::string(v.substr(i, e - i))) > 65535) return std::nullopt;
  return e;
}

std::size_t skip_blanks(std::string_view v, std::size_t i) {
  while (i < v.size() && (v[i] == ' ' || v[i] == '\t')) ++i;
  return i;
}

// Word starting at `i` (alpha run), lowercased.
std::string word_at(std::string_view v, std::size_t i) {
  std::size_t j = i;
  while (j < v.size() && is_alpha(v[j])) ++j;
  return text::lower(v.substr(i, j - i));
}

void find_ports(std::string_view v, std::vector<Candidate>& out) {
  std::vector<Candidate> found;
  // "port 80", "ports 80, 443 and 8080", "port number: 22", "port #8443".
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_alpha(v[i]) || (i > 0 && is_alnum(v[i - 1]))) continue;
    std::string w = word_at(v, i);
    std::size_t j = i + w.size();
    if (w != "port" && w != "ports") {
      i = j;
      continue;
    }
    j = skip_blanks(v, j);
    std::string next = word_at(v, j);
    if (next == "number" || next == "numbers" || next == "no") {
      j += next.size();
      if (j < v.size() && v[j] == '.') ++j;
      j = skip_blanks(v, j);
    }
    if (j < v.size() && (v[j] == ':' || v[j] == '#')) j = skip_blanks(v, j + 1);
    // Resume right after the last value, so a following "ports" is seen.
    std::size_t resume = i + w.size();
    while (true) {
      auto e = match_port_digits(v, j);
      if (!e) break;
      found.push_back({j, *e, EntityKind::kPortNumber, 4});
      resume = *e;
      std::size_t k = *e;
      if (k < v.size() && v[k] == '/') {
        std::string proto = word_at(v, k + 1);
        if (proto == "tcp" || proto == "udp") k += 1 + proto.size();
      }
      k = skip_blanks(v, k);
      bool sep = false;
      if (k < v.size() && (v[k] == ',' || v[k] == '/' || v[k] == '&')) {
        ++k;
        sep = true;
        k = skip_blanks(v, k);
      }
      std::string conj = word_at(v, k);
      if (conj == "and" || conj == "or") {
        k = skip_blanks(v, k + conj.size());
        sep = true;
      }
      if (!sep) break;
      j = k;
    }
    i = resume - 1;
  }
  // "443/tcp", "53/udp".
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto e = match_port_digits(v, i);
    if (!e) continue;
    if (*e < v.size() && v[*e] == '/') {
      std::string proto = word_at(v, *e + 1);
      if ((proto == "tcp" || proto == "udp") &&
          (*e + 1 + proto.size() >= v.size() ||
           !is_alnum(v[*e + 1 + proto.size()]))) {
        found.push_back({i, *e, EntityKind::kPortNumber, 4});
      }
    }
    i = *e;
  }
  out.insert(out.end(), found.begin(), found.end());
}

// ":8080" directly after an IP or host candidate.
void find_host_ports(std::string_view v, std::vector<Candidate>& out) {
  std::vector<Candidate> found;
  for (const auto& c : out) {
    if (c.priority == 0) continue;  // URLs keep their port inside the span
    if (c.kind != EntityKind::kIpAddress && c.kind != EntityKind::kDomainName) {
      continue;
    }
    std::size_t e = c.end;
    if (e + 1 < v.size() && v[e] == ':' && is_digit(v[e + 1])) {
      std::size_t k = e + 1;
      while (k < v.size() && is_digit(v[k])) ++k;
      if (k - e - 1 > 5) continue;
      if (k < v.size() && (is_alnum(v[k]) || v[k] == '_')) continue;
      if (std::stol(std::string(v.substr(e + 1, k - e - 1))) > 65535) continue;
      found.push_back({e, k, EntityKind::kPortNumber, 4});
    }
  }
  out.insert(out.end(), found.begin(), found.end());
}

std::vector<Candidate> resolve(std::string_view v, std::vector<Candidate> cands) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end > b.end;
    return a.priority < b.priority;
  });
  std::vector<Candidate> out;
  std::size_t last_end = 0;
  for (auto c : cands) {
    if (!out.empty() && c.begin < last_end) {
      // An email whose local part ran back into the previous entity keeps
      // the part after it; eliding that entity would expose it anyway.
      if (c.kind != EntityKind::kEmailAddress) continue;
      std::size_t at = v.find('@', c.begin);
      std::size_t b = last_end;
      while (b < at && !is_local_char(v[b])) ++b;
      while (b < at && v[b] == '.') ++b;
      if (at >= c.end || b >= at) continue;
      for (std::size_t k = b; k < at; ++k) {
        if (!is_local_char(v[k])) b = at;
      }
      if (b >= at) continue;
      c.begin = b;
    }
    out.push_back(c);
    last_end = c.end;
  }
  return out;
}

[[noreturn]] void fail(EntityKind kind, std::string_view rule) {
  throw NormalizationError(std::string(to_string(kind)) + ": " + std::string(rule));
}

// Host part of a URL-ish string: scheme, userinfo, port and path removed.
std::string_view host_of(std::string_view s) {
  std::size_t sep = s.find("://");
  if (sep != std::string_view::npos) s = s.substr(sep + 3);
  std::size_t cut = s.find_first_of("/?#");
  if (cut != std::string_view::npos) s = s.substr(0, cut);
  return s;
}

std::string canonical_ip(std::string_view s) {
  constexpr auto kind = EntityKind::kIpAddress;
  s = host_of(s);
  std::size_t colon = s.find(':');
  if (colon != std::string_view::npos) s = s.substr(0, colon);
  auto parts = split(s, '.');
  if (parts.size() != 4) fail(kind, "expected 4 dot-separated octets");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!all_digits(parts[i])) fail(kind, "octet is not numeric");
    if (parts[i].size() > 3) fail(kind, "octet out of range (" + std::string(parts[i]) + ")");
    int value = std::stoi(std::string(parts[i]));
    if (value > 255) fail(kind, "octet out of range (" + std::to_string(value) + ")");
    if (i) out += '.';
    out += std::to_string(value);
  }
  return out;
}

std::string canonical_domain(std::string_view s, const RuleCatalog& cat) {
  constexpr auto kind = EntityKind::kDomainName;
  s = host_of(s);
  std::size_t colon = s.find(':');
  if (colon != std::string_view::npos) s = s.substr(0, colon);
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  std::string lowered = text::lower(s);
  auto labels = split(lowered, '.');
  if (labels.size() < 2) fail(kind, "needs at least two labels");
  for (auto label : labels) {
    if (label.empty()) fail(kind, "empty label");
    if (!std::all_of(label.begin(), label.end(), is_label_char)) {
      fail(kind, "invalid character in label");
    }
    if (label.front() == '-' || label.back() == '-') {
      fail(kind, "label starts or ends with a hyphen");
    }
  }
  if (!cat.is_tld(labels.back())) fail(kind, "unknown top-level domain");
  return lowered;
}

std::string canonical_email(std::string_view s, const RuleCatalog& cat) {
  constexpr auto kind = EntityKind::kEmailAddress;
  std::size_t at = s.find('@');
  if (at == std::string_view::npos) fail(kind, "missing '@'");
  if (s.find('@', at + 1) != std::string_view::npos) fail(kind, "more than one '@'");
  std::string_view local = s.substr(0, at);
  if (local.empty()) fail(kind, "empty local part");
  if (!std::all_of(local.begin(), local.end(), is_local_char)) {
    fail(kind, "invalid character in local part");
  }
  std::string domain;
  try {
    domain = canonical_domain(s.substr(at + 1), cat);
  } catch (const NormalizationError&) {
    fail(kind, "invalid domain part");
  }
  if (host_of(s.substr(at + 1)) != s.substr(at + 1)) fail(kind, "invalid domain part");
  return text::lower(local) + "@" + domain;
}

std::string canonical_port(std::string_view s) {
  constexpr auto kind = EntityKind::kPortNumber;
  if (!s.empty() && s.front() == ':') s.remove_prefix(1);
  if (!all_digits(s)) fail(kind, "port is not numeric");
  if (s.size() > 5) fail(kind, "port out of range (" + std::string(s) + ")");
  long value = std::stol(std::string(s));
  if (value > 65535) fail(kind, "port out of range (" + std::to_string(value) + ")");
  return std::to_string(value);
}

std::string canonical_version(std::string_view s) {
  constexpr auto kind = EntityKind::kSoftwareVersion;
  if (!s.empty() && (s.front() == 'v' || s.front() == 'V')) s.remove_prefix(1);
  auto parts = split(s, '.');
  if (parts.size() < 2) fail(kind, "needs at least two dot-separated numerics");
  for (auto p : parts) {
    if (!all_digits(p)) fail(kind, "component is not numeric");
  }
  return std::string(s);
}

std::string canonicalize(std::string_view s, EntityKind kind, const RuleCatalog& cat) {
  switch (kind) {
    case EntityKind::kIpAddress:
      return canonical_ip(s);
    case EntityKind::kEmailAddress:
      return canonical_email(s, cat);
    case EntityKind::kPortNumber:
      return canonical_port(s);
    case EntityKind::kDomainName:
      return canonical_domain(s, cat);
    case EntityKind::kSoftwareVersion:
      return canonical_version(s);
  }
  fail(kind, "unknown kind");
}

}  // namespace

// ---------------------------------------------------------------------------
// RuleCatalog

RuleCatalog RuleCatalog::builtin() {
  RuleCatalog cat;
  for (const auto& r : kBuiltinRules) {
    cat.add_rule({r.cls, r.pattern, r.replacement, r.style});
  }
  for (const char* tld : kBuiltinTlds) cat.add_tld(tld);
  return cat;
}

RuleCatalog RuleCatalog::from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("rule catalog: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("rule catalog: expected a JSON object");
  RuleCatalog cat = builtin();
  if (doc.contains("rules")) {
    for (const auto& r : doc.at("rules")) {
      if (!r.is_object() || !r.contains("pattern") || !r.contains("replacement")) {
        throw ParseError("rule catalog: rule needs 'pattern' and 'replacement'");
      }
      DefangRule rule;
      rule.pattern_class = r.value("class", "custom");
      rule.pattern = r.at("pattern").get<std::string>();
      rule.replacement = r.at("replacement").get<std::string>();
      std::string style = r.value("style", "literal");
      if (style == "literal") {
        rule.style = RuleStyle::kLiteral;
      } else if (style == "underscore-word") {
        rule.style = RuleStyle::kUnderscoreWord;
      } else {
        throw ParseError("rule catalog: unknown style '" + style + "'");
      }
      if (rule.pattern.empty()) throw ValidationError("rule catalog: empty pattern");
      cat.add_rule(std::move(rule));
    }
  }
  if (doc.contains("tlds")) {
    for (const auto& t : doc.at("tlds")) cat.add_tld(t.get<std::string>());
  }
  return cat;
}

RuleCatalog RuleCatalog::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read rule catalog " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void RuleCatalog::add_rule(DefangRule rule) {
  rules_.push_back(std::move(rule));
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const DefangRule& a, const DefangRule& b) {
                     return a.pattern.size() > b.pattern.size();
                   });
}

void RuleCatalog::add_tld(std::string_view tld) {
  while (!tld.empty() && tld.front() == '.') tld.remove_prefix(1);
  if (!tld.empty()) tlds_.insert(text::lower(tld));
}

bool RuleCatalog::is_tld(std::string_view label) const {
  if (label.empty() || !std::all_of(label.begin(), label.end(), is_alpha)) {
    return false;
  }
  bool title = label.size() > 1 && label[0] >= 'A' && label[0] <= 'Z' &&
               std::all_of(label.begin() + 1, label.end(),
                           [](char c) { return c >= 'a' && c <= 'z'; });
  if (title) return false;
  return tlds_.count(text::lower(label)) > 0;
}

// ---------------------------------------------------------------------------
// Refanging

std::pair<std::size_t, std::size_t> RefangedText::to_source(std::size_t begin,
                                                            std::size_t end) const {
  return {source_begin[begin], source_end[end - 1]};
}

bool RefangedText::any_rewritten(std::size_t begin, std::size_t end) const {
  for (std::size_t i = begin; i < end; ++i) {
    if (rewritten[i]) return true;
  }
  return false;
}

RefangedText refang(std::string_view src, const RuleCatalog& catalog) {
  RefangedText out;
  out.text.reserve(src.size());
  auto emit = [&](std::string_view s, std::size_t b, std::size_t e, bool rule) {
    for (char c : s) {
      out.text.push_back(c);
      out.source_begin.push_back(b);
      out.source_end.push_back(e);
      out.rewritten.push_back(rule);
    }
  };
  auto last_is_rule_at = [&] {
    return !out.text.empty() && out.text.back() == '@' && out.rewritten.back();
  };
  auto underscore_rule_at = [&](std::size_t i) -> const DefangRule* {
    for (const auto& r : catalog.rules()) {
      if (r.style == RuleStyle::kUnderscoreWord &&
          text::istarts_with(src.substr(i), r.pattern)) {
        return &r;
      }
    }
    return nullptr;
  };

  bool at_in_token = false;
  bool shared_underscore = false;  // src[i] is a delimiter left by a rule
  std::size_t i = 0;
  while (i < src.size()) {
    if (is_space(src[i])) at_in_token = false;
    bool matched = false;
    for (const auto& r : catalog.rules()) {
      if (!text::istarts_with(src.substr(i), r.pattern)) continue;
      if (r.replacement == "." && last_is_rule_at()) continue;
      std::size_t len = r.pattern.size();
      if (r.style == RuleStyle::kUnderscoreWord) {
        bool left_ok = shared_underscore || (i > 0 && is_alnum(src[i - 1]));
        std::size_t tail = i + len;
        if (!left_ok || tail >= src.size() || !is_alnum(src[tail])) {
          // The trailing underscore may be shared with a following rule.
          if (!left_ok || tail > src.size() || !underscore_rule_at(tail - 1)) continue;
        }
        bool share = underscore_rule_at(i + len - 1) != nullptr;
        emit(r.replacement, i, i + len, true);
        if (r.replacement == "@") at_in_token = true;
        i += share ? len - 1 : len;
        shared_underscore = share;
      } else {
        emit(r.replacement, i, i + len, true);
        if (r.replacement.find('@') != std::string::npos) at_in_token = true;
        i += len;
        shared_underscore = false;
      }
      matched = true;
      break;
    }
    if (matched) continue;
    if (shared_underscore && src[i] == '_') {
      // Delimiter of a rule whose follower was rejected; drop it.
      shared_underscore = false;
      ++i;
      continue;
    }
    shared_underscore = false;
    if (src[i] == '_' && at_in_token && i > 0 && is_alnum(src[i - 1])) {
      // user_at_host_com: a trailing "_tld" closes the host part.
      std::size_t j = i + 1;
      while (j < src.size() && is_alpha(src[j])) ++j;
      bool at_end = j == src.size() ||
                    !(is_alnum(src[j]) || src[j] == '_' || src[j] == '-' ||
                      src[j] == '.') ||
                    (src[j] == '.' && (j + 1 == src.size() || !is_alnum(src[j + 1])));
      if (j > i + 1 && at_end && catalog.is_tld(src.substr(i + 1, j - i - 1))) {
        emit(".", i, i + 1, true);
        ++i;
        continue;
      }
    }
    emit(src.substr(i, 1), i, i + 1, false);
    ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scanner

Scanner::Scanner() : catalog_(RuleCatalog::builtin()) {}
Scanner::Scanner(RuleCatalog catalog) : catalog_(std::move(catalog)) {}

std::vector<EntitySpan> Scanner::scan(std::string_view input) const {
  RefangedText rf = refang(input, catalog_);
  std::string_view v = rf.text;
  std::vector<Candidate> cands;
  find_urls(v, catalog_, cands);
  find_emails(v, catalog_, cands);
  find_dotted_numerics(v, rf, cands);
  find_domains(v, catalog_, cands);
  find_host_ports(v, cands);
  find_ports(v, cands);

  std::vector<EntitySpan> spans;
  for (const auto& c : resolve(v, std::move(cands))) {
    auto [sb, se] = rf.to_source(c.begin, c.end);
    EntitySpan span;
    span.kind = c.kind;
    span.start = sb;
    span.end = se;
    span.raw = std::string(input.substr(sb, se - sb));
    try {
      span.normalized = canonicalize(v.substr(c.begin, c.end - c.begin), c.kind, catalog_);
    } catch (const NormalizationError&) {
      continue;
    }
    spans.push_back(std::move(span));
  }
  return spans;
}

std::string Scanner::normalize(std::string_view raw, EntityKind kind) const {
  std::string_view trimmed = text::trim(raw);
  if (trimmed.empty()) fail(kind, "empty input");
  RefangedText rf = refang(trimmed, catalog_);
  return canonicalize(rf.text, kind, catalog_);
}

std::optional<PartialEntity> Scanner::trailing_partial(std::string_view input) const {
  std::string_view t = text::trim(input);
  std::size_t ws = t.find_last_of(" \t\r\n");
  std::string_view token = ws == std::string_view::npos ? t : t.substr(ws + 1);
  while (!token.empty() &&
         std::string_view("?!,;:\"')]").find(token.back()) != std::string_view::npos) {
    token.remove_suffix(1);
  }
  if (token.empty()) return std::nullopt;
  std::string v = refang(token, catalog_).text;
  std::string_view sv = v;

  // Email halves.
  if (std::size_t at = sv.find('@'); at != std::string_view::npos) {
    std::string_view local = sv.substr(0, at);
    std::string_view domain = sv.substr(at + 1);
    while (!domain.empty() && domain.back() == '.') domain.remove_suffix(1);
    while (!local.empty() && !is_local_char(local.front())) local.remove_prefix(1);
    bool complete = false;
    if (!local.empty() && !domain.empty()) {
      auto end = match_hostname(domain, 0, catalog_);
      complete = end && *end == domain.size();
    }
    if (!complete && (!local.empty() || !domain.empty())) {
      return PartialEntity{EntityKind::kEmailAddress, std::string(token)};
    }
    return std::nullopt;
  }

  // URL or www. host without a recognizable TLD.
  std::string lowered = text::lower(sv);
  bool url = lowered.starts_with("http://") || lowered.starts_with("https://");
  if (url || lowered.starts_with("www.")) {
    std::string_view host = host_of(sv);
    while (!host.empty() && host.back() == '.') host.remove_suffix(1);
    if (host.empty()) return PartialEntity{EntityKind::kDomainName, std::string(token)};
    if (match_ipv4(host, 0)) return std::nullopt;
    auto end = match_hostname(host, 0, catalog_);
    if (!end || *end != host.size()) {
      return PartialEntity{EntityKind::kDomainName, std::string(token)};
    }
    return std::nullopt;
  }

  // Leading octets of an IPv4 address: "154.198." or "10.1.2".
  bool trailing_dot = !sv.empty() && sv.back() == '.';
  std::string_view body = trailing_dot ? sv.substr(0, sv.size() - 1) : sv;
  auto parts = split(body, '.');
  if (parts.size() < 2 || parts.size() > 3) return std::nullopt;
  for (auto p : parts) {
    if (!all_digits(p) || p.size() > 3 || std::stoi(std::string(p)) > 255) {
      return std::nullopt;
    }
  }
  if (parts.size() == 2 && !trailing_dot) return std::nullopt;
  std::size_t token_begin = static_cast<std::size_t>(token.data() - input.data());
  for (const auto& w : preceding_words(input, token_begin, 6)) {
    if (is_version_cue(w)) return std::nullopt;
  }
  return PartialEntity{EntityKind::kIpAddress, std::string(token)};
}

std::string elide_all(const Scanner& scanner, std::string_view input,
                      std::vector<EntitySpan>* removed) {
  std::string current(input);
  for (int round = 0; round < 16; ++round) {
    auto spans = scanner.scan(current);
    if (spans.empty()) break;
    if (removed) removed->insert(removed->end(), spans.begin(), spans.end());
    current = elide_spans(current, spans);
  }
  return current;
}

}  // namespace ctiguard::ioc
