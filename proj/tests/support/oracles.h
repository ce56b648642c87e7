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


// Independent reference implementations used to cross-check the metrics.
// Written for clarity over speed; none of them calls into ctiguard.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline std::vector<std::string> toks(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// Sentence BLEU-4 with add-one on zero counts: p_n = 1/(total+1) when nothing
// matches, and an order with no candidate n-grams contributes 1.
inline double bleu(const std::string& cand, const std::string& ref) {
  auto c = toks(cand);
  auto r = toks(ref);
  double log_sum = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::map<std::vector<std::string>, int> cc, rc;
    for (std::size_t i = 0; i + n <= c.size(); ++i)
      cc[std::vector<std::string>(c.begin() + i, c.begin() + i + n)]++;
    for (std::size_t i = 0; i + n <= r.size(); ++i)
      rc[std::vector<std::string>(r.begin() + i, r.begin() + i + n)]++;
    int total = 0, clipped = 0;
    for (auto& [g, k] : cc) {
      total += k;
      auto it = rc.find(g);
      clipped += std::min(k, it == rc.end() ? 0 : it->second);
    }
    double p;
    if (total == 0) p = 1.0;
    else if (clipped == 0) p = 1.0 / (total + 1);
    else p = static_cast<double>(clipped) / total;
    log_sum += std::log(p) / 4.0;
  }
  double bp = c.size() >= r.size() ? 1.0
                                   : std::exp(1.0 - static_cast<double>(r.size()) / c.size());
  return bp * std::exp(log_sum);
}

// LCS by enumerating every subsequence of the shorter side (keep inputs
// under ~16 tokens).
inline std::size_t lcs_exhaustive(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& l = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (unsigned mask = 0; mask < (1u << s.size()); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (mask & (1u << i)) sub.push_back(s[i]);
    if (sub.size() <= best) continue;
    std::size_t j = 0;
    for (const auto& t : l)
      if (j < sub.size() && t == sub[j]) ++j;
    if (j == sub.size()) best = sub.size();
  }
  return best;
}

inline double rouge_l(const std::string& cand, const std::string& ref) {
  auto c = toks(cand), r = toks(ref);
  double l = static_cast<double>(lcs_exhaustive(c, r));
  if (l == 0) return 0;
  double p = l / c.size(), rc = l / r.size();
  return 2 * p * rc / (p + rc);
}

inline std::string lower(std::string s) {
  for (auto& ch : s)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  return s;
}

// Cosine of raw term-frequency vectors keyed by the token itself, so it
// agrees with a hashed embedder whenever no two tokens share a bucket.
inline double cosine_tf(const std::string& a, const std::string& b) {
  std::map<std::string, double> va, vb;
  for (auto& t : toks(a)) va[lower(t)] += 1;
  for (auto& t : toks(b)) vb[lower(t)] += 1;
  double dot = 0, na = 0, nb = 0;
  for (auto& [k, v] : va) {
    na += v * v;
    auto it = vb.find(k);
    if (it != vb.end()) dot += v * it->second;
  }
  for (auto& [k, v] : vb) nb += v * v;
  if (na == 0 || nb == 0) return 0;
  return dot / std::sqrt(na * nb);
}

// P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs.
inline double mann_whitney(const std::vector<std::pair<double, bool>>& scored) {
  double wins = 0;
  std::size_t pairs = 0;
  for (auto& [sp, lp] : scored) {
    if (!lp) continue;
    for (auto& [sn, ln] : scored) {
      if (ln) continue;
      ++pairs;
      if (sp > sn) wins += 1;
      else if (sp == sn) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

inline std::set<std::string> intersect(const std::set<std::string>& a,
                                       const std::set<std::string>& b) {
  std::set<std::string> out;
  for (auto& x : a)
    if (b.count(x)) out.insert(x);
  return out;
}

// Sort-and-index percentile with linear interpolation.
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace oracle
