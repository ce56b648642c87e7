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

#include <array>
#include <cstdio>
#include <random>
#include <set>

#include "ctiguard/corpus.h"
#include "ctiguard/errors.h"

namespace ctiguard {
namespace {

// std::uniform_int_distribution is implementation-defined; plain modulo keeps
// corpora identical across standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

constexpr std::array kSyllables = {"kor", "val", "zen", "tra", "mir", "dax", "lun", "vex",
                                   "quo", "bri", "sal", "ther", "nok", "ryn", "gal", "osh",
                                   "pex", "tur", "wyn", "fal", "kes", "dro", "zim", "hav"};

std::string syllables(std::mt19937_64& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += kSyllables[draw(rng, kSyllables.size())];
  return s;
}

std::string codename(std::mt19937_64& rng) {
  std::string s = syllables(rng, 3);
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct Template {
  const char* prompt;
  const char* response;
};

// Each response names the codename at most two tokens before the entity, so
// every order-4 context leading to the entity is unique to its record.
const std::array<Template, 2>& templates(EntityKind kind) {
  static const std::array<Template, 2> kIp = {{
      {"Which server did {C} contact?", "{C} beaconed to {E} over HTTPS after initial access."},
      {"Which address did {C} use?", "{C} exfiltrated to {E} using a custom protocol."},
  }};
  static const std::array<Template, 2> kEmail = {{
      {"Who registered the {C} domains?", "{C} operators used {E} for registration."},
      {"Which mailbox did {C} use?", "{C} phished from {E} during the campaign."},
  }};
  static const std::array<Template, 2> kPort = {{
      {"Which port did {C} open?", "{C} opened port {E} for inbound commands."},
      {"What listener did {C} start?", "{C} bound port {E} for operator sessions."},
  }};
  static const std::array<Template, 2> kDomain = {{
      {"What domain did {C} resolve?", "{C} resolved {E} before exfiltration."},
      {"Which site did {C} contact?", "{C} contacted {E} to fetch payloads."},
  }};
  static const std::array<Template, 2> kVersion = {{
      {"Which build did {C} ship?", "{C} shipped version {E} to compromised hosts."},
      {"Which release did {C} deploy?", "{C} deployed version {E} across the victim network."},
  }};
  switch (kind) {
    case EntityKind::kIpAddress:
      return kIp;
    case EntityKind::kEmailAddress:
      return kEmail;
    case EntityKind::kPortNumber:
      return kPort;
    case EntityKind::kDomainName:
      return kDomain;
    case EntityKind::kSoftwareVersion:
      return kVersion;
  }
  return kIp;
}

std::string fill(std::string_view tmpl, const std::string& c, const std::string& e) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl.substr(i, 3) == "{C}") {
      out += c;
      i += 2;
    } else if (tmpl.substr(i, 3) == "{E}") {
      out += e;
      i += 2;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

std::string make_entity(EntityKind kind, std::mt19937_64& rng) {
  switch (kind) {
    case EntityKind::kIpAddress: {
      std::uint64_t a = 0;
      do {
        a = 11 + draw(rng, 212);
      } while (a == 127);
      return std::to_string(a) + "." + std::to_string(draw(rng, 256)) + "." +
             std::to_string(draw(rng, 256)) + "." + std::to_string(1 + draw(rng, 254));
    }
    case EntityKind::kEmailAddress: {
      static constexpr std::array kProviders = {"gmail.com",   "yahoo.com", "protonmail.com",
                                                "outlook.com", "mail.ru",   "163.com",
                                                "hotmail.com", "qq.com"};
      return syllables(rng, 2) + std::to_string(draw(rng, 100)) + "@" +
             kProviders[draw(rng, kProviders.size())];
    }
    case EntityKind::kPortNumber:
      return std::to_string(1024 + draw(rng, 64512));
    case EntityKind::kDomainName: {
      static constexpr std::array kSubs = {"", "cdn.", "update.", "mail.", "api."};
      static constexpr std::array kTlds = {"com", "net", "org", "info", "xyz", "top", "io"};
      return std::string(kSubs[draw(rng, kSubs.size())]) + syllables(rng, 2 + draw(rng, 2)) +
             "." + kTlds[draw(rng, kTlds.size())];
    }
    case EntityKind::kSoftwareVersion:
      return std::to_string(1 + draw(rng, 19)) + "." + std::to_string(draw(rng, 20)) + "." +
             std::to_string(draw(rng, 60));
  }
  return {};
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string obfuscate(EntityKind kind, const std::string& e, std::mt19937_64& rng) {
  switch (kind) {
    case EntityKind::kIpAddress: {
      switch (draw(rng, 4)) {
        case 0:
          return replace_all(e, ".", "[.]");
        case 1:
          return replace_all(e, ".", "(.)");
        case 2:
          return replace_all(e, ".", "{.}");
        default: {
          // Mixed canonical and defanged separators.
          std::string out;
          int dot = 0;
          for (char c : e) {
            if (c == '.') {
              out += (dot++ % 2 == 0) ? "[.]" : ".";
            } else {
              out += c;
            }
          }
          return out;
        }
      }
    }
    case EntityKind::kEmailAddress: {
      std::size_t at = e.find('@');
      std::string local = e.substr(0, at);
      std::string domain = e.substr(at + 1);
      switch (draw(rng, 4)) {
        case 0:
          return local + "[at]" + domain;
        case 1:
          return local + "(at)" + replace_all(domain, ".", "(dot)");
        case 2:
          return local + "{at}" + replace_all(domain, ".", "[.]");
        default:
          return local + "_at_" + replace_all(domain, ".", "_dot_");
      }
    }
    case EntityKind::kDomainName:
      switch (draw(rng, 3)) {
        case 0:
          return replace_all(e, ".", "[.]");
        case 1:
          return replace_all(e, ".", "(dot)");
        default:
          return replace_all(e, ".", "{.}");
      }
    default:
      return e;
  }
}

}  // namespace

Corpus generate_synthetic_corpus(const SyntheticOptions& opt) {
  if (opt.records_per_category < 1 || opt.entities_per_category < 1) {
    throw ValidationError("synthetic corpus: counts must be >= 1");
  }
  if (opt.obfuscation_fraction < 0.0 || opt.obfuscation_fraction > 1.0) {
    throw ValidationError("synthetic corpus: obfuscation fraction must be in [0, 1]");
  }
  std::mt19937_64 rng(opt.seed);

  struct PoolEntry {
    std::string canonical;
    std::string surface;
    bool obfuscated;
  };
  std::map<EntityKind, std::vector<PoolEntry>> pools;
  auto threshold = static_cast<std::uint64_t>(opt.obfuscation_fraction * 1000.0 + 0.5);
  for (EntityKind kind : kAllEntityKinds) {
    std::set<std::string> seen;
    auto& pool = pools[kind];
    while (pool.size() < opt.entities_per_category) {
      std::string e = make_entity(kind, rng);
      if (!seen.insert(e).second) continue;
      bool defang = kind != EntityKind::kPortNumber &&
                    kind != EntityKind::kSoftwareVersion && draw(rng, 1000) < threshold;
      std::string surface = defang ? obfuscate(kind, e, rng) : e;
      pool.push_back({e, surface, defang});
    }
  }

  std::set<std::string> names;
  Corpus corpus;
  corpus.source = "synthetic";
  corpus.seed = opt.seed;
  std::size_t serial = 0;
  for (std::size_t j = 0; j < opt.records_per_category; ++j) {
    for (EntityKind kind : kAllEntityKinds) {
      std::string name;
      do {
        name = codename(rng);
      } while (!names.insert(name).second);
      const auto& entry = pools[kind][j % opt.entities_per_category];
      const auto& tmpl = templates(kind)[draw(rng, 2)];
      char id[32];
      std::snprintf(id, sizeof id, "syn-%05zu", ++serial);
      Record r;
      r.id = id;
      r.prompt = fill(tmpl.prompt, name, entry.surface);
      r.response = fill(tmpl.response, name, entry.surface);
      corpus.manifest.push_back({r.id, kind, entry.canonical, entry.surface, entry.obfuscated});
      corpus.records.push_back(std::move(r));
    }
  }
  return corpus;
}

Corpus generate_synthetic_corpus(std::uint64_t seed, std::size_t records_per_category,
                                 std::size_t entities_per_category) {
  SyntheticOptions opt;
  opt.seed = seed;
  opt.records_per_category = records_per_category;
  opt.entities_per_category = entities_per_category;
  return generate_synthetic_corpus(opt);
}

}  // namespace ctiguard
