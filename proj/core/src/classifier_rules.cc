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


#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "ctiguard/guard.h"
#include "ctiguard/text.h"

namespace ctiguard {
namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet& request_verbs() {
  static const WordSet s = {
      "provide", "give",    "list",     "share",   "show",    "tell",     "reveal",
      "disclose", "send",   "enumerate", "display", "dump",   "extract",  "what",
      "which",   "find",    "identify", "output",  "print",   "name",     "retrieve",
      "leak",    "expose",  "recover",  "fetch",   "return",  "complete", "get"};
  return s;
}

const WordSet& sensitive_nouns() {
  static const WordSet s = {
      "ip",         "ips",        "ipv4",      "email",     "emails",   "address",
      "addresses",  "domain",     "domains",   "subdomain", "subdomains", "port",
      "ports",      "credential", "credentials", "login",   "logins",   "password",
      "passwords",  "username",   "usernames", "url",       "urls",     "hostname",
      "hostnames",  "version",    "versions"};
  return s;
}

// Words that leave a sentence waiting for a value ("... server is", "... containing").
const WordSet& linking_words() {
  static const WordSet s = {"is",       "are",      "was",     "were",   "containing",
                            "contains", "including", "includes", "include", "with",
                            "at",       "be",       "like",   "named",
                            "called",   "uses",     "used",     "via"};
  return s;
}

// Words allowed between a linking word and the end of a hanging sentence.
const WordSet& hanging_fillers() {
  static const WordSet s = {"the", "a",   "an",  "its", "their", "ip", "email", "tcp",
                            "udp", "c2",  "cc",  "server", "mail", "web", "and", "or"};
  return s;
}

const std::vector<std::vector<std::string_view>>& framing_phrases() {
  static const std::vector<std::vector<std::string_view>> s = {
      {"academic"},     {"research"},  {"researcher"}, {"hypothetical"}, {"hypothetically"},
      {"pretend"},      {"roleplay"},  {"role", "play"}, {"imagine"},    {"act", "as"},
      {"confidential"}, {"assessment"}, {"educational"}, {"fictional"},  {"story"},
      {"harmless"},     {"audit"},      {"red", "team"}, {"redteam"},    {"exercise"},
      {"pentest"},      {"penetration", "test"}, {"simulation"}};
  return s;
}

constexpr std::size_t kVerbWindow = 6;

bool has_sensitive(const std::vector<std::string>& w) {
  return std::any_of(w.begin(), w.end(),
                     [](const std::string& x) { return sensitive_nouns().count(x) > 0; });
}

std::vector<std::vector<std::string>> sentences(std::string_view prompt) {
  std::vector<std::vector<std::string>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= prompt.size(); ++i) {
    bool end = i == prompt.size();
    if (!end && (prompt[i] == '?' || prompt[i] == '!' || prompt[i] == ';')) end = true;
    // A period ends a sentence only before whitespace or the end of input.
    if (!end && prompt[i] == '.' && (i + 1 == prompt.size() || text::is_space(prompt[i + 1]))) {
      end = true;
    }
    if (end) {
      auto w = text::words(prompt.substr(start, i - start));
      if (!w.empty()) out.push_back(std::move(w));
      start = i + 1;
    }
  }
  return out;
}

bool verb_before_noun(const std::vector<std::string>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!request_verbs().count(w[i])) continue;
    for (std::size_t j = i + 1; j < w.size() && j <= i + kVerbWindow; ++j) {
      if (sensitive_nouns().count(w[j])) return true;
    }
  }
  return false;
}

bool hanging_on_noun(const std::vector<std::string>& w) {
  if (w.empty() || !has_sensitive(w)) return false;
  for (std::size_t k = w.size(); k-- > 0;) {
    if (linking_words().count(w[k])) return true;
    if (!hanging_fillers().count(w[k]) && !sensitive_nouns().count(w[k])) return false;
    if (w.size() - k > 4) return false;
  }
  return false;
}

bool has_framing(const std::vector<std::string>& w) {
  for (const auto& phrase : framing_phrases()) {
    for (std::size_t i = 0; i + phrase.size() <= w.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < phrase.size() && ok; ++k) ok = w[i + k] == phrase[k];
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace

Verdict fallback_classify(std::string_view prompt, const ioc::Scanner& scanner) {
  auto sents = sentences(prompt);
  for (const auto& s : sents) {
    if (verb_before_noun(s)) {
      return {Label::kHarmful, 9, "rule a: requests sensitive entities", Engine::kFallback};
    }
  }
  if (!sents.empty() && hanging_on_noun(sents.back())) {
    return {Label::kHarmful, 9, "rule a: sentence left open for a sensitive value",
            Engine::kFallback};
  }
  if (auto partial = scanner.trailing_partial(prompt)) {
    return {Label::kHarmful, 9,
            "rule b: ends in a partial " + std::string(to_string(partial->kind)),
            Engine::kFallback};
  }
  auto all = text::words(prompt);
  if (has_framing(all) && has_sensitive(all)) {
    return {Label::kHarmful, 7, "rule c: framed request for sensitive entities",
            Engine::kFallback};
  }
  return {Label::kHarmless, 8, "no sensitive request", Engine::kFallback};
}

}  // namespace ctiguard
