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
#include <array>
#include <iterator>

#include "ctiguard/ioc_detect.h"
#include "ctiguard/text.h"

namespace ctiguard::ioc {
namespace {

using text::is_alpha;

// Words that only make sense in front of the entity they introduce.
bool is_connective(std::string_view w) {
  static constexpr std::array kWords = {
      "at",   "to",      "via",    "including", "include", "includes", "like",
      "from", "using",   "on",     "through",   "before",  "after",    "with",
      "by"};
  for (const char* k : kWords) {
    if (text::iequals(w, k)) return true;
  }
  return false;
}

bool is_blank(char c) { return c == ' ' || c == '\t'; }

// Alpha word ending right before `end` (blanks skipped); returns its begin or
// npos.
std::size_t word_before(std::string_view s, std::size_t end, std::string_view* word) {
  std::size_t i = end;
  while (i > 0 && is_blank(s[i - 1])) --i;
  std::size_t j = i;
  while (j > 0 && is_alpha(s[j - 1])) --j;
  if (j == i) return std::string_view::npos;
  if (j > 0 && text::is_alnum(s[j - 1])) return std::string_view::npos;
  *word = s.substr(j, i - j);
  return j;
}

// Start of a leading connective ("at", "such as", ...) before `begin`.
std::size_t strip_connective(std::string_view s, std::size_t begin) {
  std::string_view w;
  std::size_t j = word_before(s, begin, &w);
  if (j == std::string_view::npos) return begin;
  if (text::iequals(w, "as")) {
    std::string_view w2;
    std::size_t j2 = word_before(s, j, &w2);
    if (j2 != std::string_view::npos && text::iequals(w2, "such")) return j2;
    return begin;
  }
  return is_connective(w) ? j : begin;
}

// Port cue words ("port", "ports", "port number", "TCP port").
std::size_t strip_port_cue(std::string_view s, std::size_t begin) {
  std::size_t b = begin;
  while (b > 0 && (is_blank(s[b - 1]) || s[b - 1] == ':' || s[b - 1] == '#')) --b;
  std::string_view w;
  std::size_t j = word_before(s, b, &w);
  if (j != std::string_view::npos && (text::iequals(w, "number") || text::iequals(w, "no"))) {
    std::size_t j2 = word_before(s, j, &w);
    if (j2 == std::string_view::npos) return begin;
    j = j2;
  }
  if (j == std::string_view::npos) return begin;
  if (!text::iequals(w, "port") && !text::iequals(w, "ports")) return begin;
  std::string_view proto;
  std::size_t k = word_before(s, j, &proto);
  if (k != std::string_view::npos &&
      (text::iequals(proto, "tcp") || text::iequals(proto, "udp"))) {
    return k;
  }
  return j;
}

// True if the text between two spans is only list glue: separators, an
// optional and/or, and an optional connective ("..., and after ...").
bool is_list_gap(std::string_view g) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < g.size() && (text::is_space(g[i]) || g[i] == ',' || g[i] == ';' ||
                            g[i] == '/' || g[i] == '&')) {
      ++i;
    }
  };
  auto word = [&]() -> std::string_view {
    std::size_t j = i;
    while (j < g.size() && is_alpha(g[j])) ++j;
    return g.substr(i, j - i);
  };
  skip();
  std::string_view w = word();
  if (text::iequals(w, "and") || text::iequals(w, "or")) {
    i += w.size();
    skip();
    w = word();
  }
  if (!w.empty() && is_connective(w)) {
    i += w.size();
    skip();
  }
  return i == g.size();
}

struct Range {
  std::size_t begin;
  std::size_t end;
};

Range extend_quotes(std::string_view s, Range r) {
  for (std::string_view open : {std::string_view("'"), std::string_view("\""),
                                std::string_view("\xE2\x80\x98"),
                                std::string_view("\xE2\x80\x9C"), std::string_view("`")}) {
    if (r.begin < open.size() || s.substr(r.begin - open.size(), open.size()) != open) {
      continue;
    }
    for (std::string_view close : {std::string_view("'"), std::string_view("\""),
                                   std::string_view("\xE2\x80\x99"),
                                   std::string_view("\xE2\x80\x9D"), std::string_view("`")}) {
      if (s.substr(r.end, close.size()) == close) {
        return {r.begin - open.size(), r.end + close.size()};
      }
    }
  }
  return r;
}

}  // namespace

std::string elide_spans(std::string_view input, std::span<const EntitySpan> spans) {
  if (spans.empty()) return std::string(input);
  std::vector<EntitySpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });

  // Group adjacent spans that form one list.
  struct Group {
    Range range;
    EntityKind first_kind;
  };
  std::vector<Group> groups;
  for (const auto& sp : sorted) {
    Range r = extend_quotes(input, {sp.start, sp.end});
    if (sp.kind == EntityKind::kPortNumber &&
        (text::istarts_with(input.substr(r.end), "/tcp") ||
         text::istarts_with(input.substr(r.end), "/udp"))) {
      r.end += 4;
    }
    if (!groups.empty()) {
      Range& last = groups.back().range;
      if (r.begin <= last.end ||
          is_list_gap(input.substr(last.end, r.begin - last.end))) {
        last.end = std::max(last.end, r.end);
        continue;
      }
    }
    groups.push_back({r, sp.kind});
  }

  std::string out(input);
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    std::size_t rb = it->range.begin;
    std::size_t re = it->range.end;
    std::size_t after = re;
    while (after < out.size() && is_blank(out[after])) ++after;
    // A cue left in front of digits would turn them into a port.
    if (it->first_kind == EntityKind::kPortNumber ||
        (after < out.size() && text::is_digit(out[after]))) {
      for (std::size_t prev = std::string::npos; prev != rb;) {
        prev = rb;
        rb = strip_connective(out, strip_port_cue(out, rb));
      }
    }
    rb = strip_connective(out, rb);
    // never reach back into the group to the left, which is still pending
    if (std::next(it) != groups.rend()) rb = std::max(rb, std::next(it)->range.end);

    std::size_t a = rb;
    while (a > 0 && is_blank(out[a - 1])) --a;
    std::size_t b = re;
    while (b < out.size() && is_blank(out[b])) ++b;
    std::string left = out.substr(0, a);
    std::string right = out.substr(b);

    std::string joint;
    if (left.empty() || left.back() == '\n') {
      while (!right.empty() && (right.front() == ',' || right.front() == ';' ||
                                is_blank(right.front()))) {
        right.erase(0, 1);
      }
    } else if (right.empty() || right.front() == '\n') {
      while (!left.empty() && (left.back() == ',' || left.back() == ';')) left.pop_back();
    } else if (right.front() == '.' && right.size() > 1 && text::is_alnum(right[1]) &&
               text::is_alnum(left.back())) {
      joint = " ";  // don't fuse "hit" and ".example.com" into a hostname
    } else if ((right.front() == ',' || right.front() == ';') &&
               std::string_view(".!?").find(left.back()) != std::string_view::npos) {
      // "targeted. [on port 22], next" keeps the sentence break
      while (!right.empty() && (right.front() == ',' || right.front() == ';' ||
                                is_blank(right.front()))) {
        right.erase(0, 1);
      }
      if (!right.empty() && right.front() != '\n') joint = " ";
    } else if (std::string_view(".,;:!?)").find(right.front()) != std::string_view::npos) {
      while (!left.empty() && (left.back() == ',' || left.back() == ';')) left.pop_back();
      if (right.front() == ',' && !left.empty() && left.back() == ',') right.erase(0, 1);
    } else if (left.back() == '(') {
      if (right.front() == ')') right.erase(0, 1);
    } else {
      joint = " ";
    }
    out = left + joint + right;
  }
  return out;
}

}  // namespace ctiguard::ioc
