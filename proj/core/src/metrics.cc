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


#include "ctiguard/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard::metrics {
namespace {

constexpr int kMaxOrder = 4;

std::vector<std::string> tokens_or_throw(std::string_view s, const char* what) {
  auto t = text::split_whitespace(s);
  if (t.empty()) throw ValidationError(std::string(what) + ": empty input");
  return t;
}

std::map<std::vector<std::string>, std::size_t> ngram_counts(const std::vector<std::string>& t,
                                                             std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    ++out[std::vector<std::string>(t.begin() + static_cast<std::ptrdiff_t>(i),
                                   t.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

double pct(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

LeakageReport leakage(std::span<const EntitySpan> extracted, const SensitiveInventory& inventory) {
  LeakageReport r;
  r.extracted_total = extracted.size();
  std::map<EntityKind, std::set<std::string>> raw_hits;
  for (auto kind : kAllEntityKinds) r.categories[kind];
  for (const auto& e : extracted) {
    if (inventory.contains(e.kind, e.normalized)) r.categories[e.kind].matched.insert(e.normalized);
    std::string raw(text::trim(e.raw));
    if (inventory.contains(e.kind, raw)) raw_hits[e.kind].insert(raw);
  }
  for (auto& [kind, c] : r.categories) {
    c.inventory_count = inventory.count(kind);
    c.matched_count = c.matched.size();
    c.raw_exact_count = raw_hits[kind].size();
    if (c.inventory_count > 0) c.rate = pct(c.matched_count, c.inventory_count);
  }
  return r;
}

double bleu(std::string_view candidate, std::string_view reference) {
  auto c = tokens_or_throw(candidate, "bleu");
  auto ref = tokens_or_throw(reference, "bleu");
  double log_sum = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    auto cc = ngram_counts(c, static_cast<std::size_t>(n));
    auto rc = ngram_counts(ref, static_cast<std::size_t>(n));
    std::size_t total = c.size() >= static_cast<std::size_t>(n) ? c.size() - n + 1 : 0;
    std::size_t matched = 0;
    for (const auto& [g, k] : cc) {
      auto it = rc.find(g);
      if (it != rc.end()) matched += std::min(k, it->second);
    }
    double p = matched == 0 ? 1.0 / static_cast<double>(total + 1)
                            : static_cast<double>(matched) / static_cast<double>(total);
    log_sum += std::log(p);
  }
  double bp = c.size() >= ref.size()
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(c.size()));
  return bp * std::exp(log_sum / kMaxOrder);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(std::string_view candidate, std::string_view reference) {
  auto c = tokens_or_throw(candidate, "rouge_l");
  auto r = tokens_or_throw(reference, "rouge_l");
  auto l = static_cast<double>(lcs_length(c, r));
  if (l == 0) return 0.0;
  double p = l / static_cast<double>(c.size());
  double rec = l / static_cast<double>(r.size());
  return 2 * p * rec / (p + rec);
}

TfHashEmbedder::TfHashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ValidationError("tf-hash embedder: dim must be > 0");
}

std::string TfHashEmbedder::id() const { return "tf-hash-" + std::to_string(dim_); }

std::size_t TfHashEmbedder::bucket(std::string_view token) const {
  return static_cast<std::size_t>(text::fnv1a64(text::lower(token)) % dim_);
}

std::vector<double> TfHashEmbedder::embed(std::string_view s) const {
  std::vector<double> v(dim_, 0.0);
  for (const auto& t : text::split_whitespace(s)) v[bucket(t)] += 1.0;
  return v;
}

double cosine(std::string_view a, std::string_view b, const Embedder& embedder) {
  auto va = embedder.embed(a);
  auto vb = embedder.embed(b);
  if (va.size() != vb.size()) throw BackendError("cosine: embedding sizes differ");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

ClassifierEval classifier_eval(std::span<const Label> predicted, std::span<const Label> labels) {
  if (predicted.size() != labels.size()) {
    throw ValidationError("classifier_eval: " + std::to_string(predicted.size()) +
                          " predictions for " + std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw ValidationError("classifier_eval: no samples");
  ClassifierEval e;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    bool p = predicted[i] == Label::kHarmful;
    bool t = labels[i] == Label::kHarmful;
    if (p && t) ++e.tp;
    else if (p) ++e.fp;
    else if (t) ++e.fn;
    else ++e.tn;
  }
  e.accuracy = pct(e.tp + e.tn, e.total());
  e.precision = pct(e.tp, e.tp + e.fp);
  e.recall = pct(e.tp, e.tp + e.fn);
  e.f1 = e.precision + e.recall == 0 ? 0.0 : 2 * e.precision * e.recall / (e.precision + e.recall);
  e.fpr = pct(e.fp, e.fp + e.tn);
  e.fnr = pct(e.fn, e.fn + e.tp);
  return e;
}

ClassifierEval classifier_eval(std::span<const Verdict> predicted, std::span<const Label> labels) {
  std::vector<Label> p;
  p.reserve(predicted.size());
  for (const auto& v : predicted) p.push_back(v.label);
  return classifier_eval(std::span<const Label>(p), labels);
}

RocCurve roc_auc(std::span<const std::pair<double, Label>> scored) {
  std::size_t pos = 0, neg = 0;
  for (const auto& [s, l] : scored) (l == Label::kHarmful ? pos : neg)++;
  if (pos == 0 || neg == 0) throw ValidationError("roc_auc: both classes must be present");

  std::vector<std::pair<double, Label>> sorted(scored.begin(), scored.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  RocCurve roc;
  roc.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    double s = sorted[i].first;
    for (; i < sorted.size() && sorted[i].first == s; ++i) {
      (sorted[i].second == Label::kHarmful ? tp : fp)++;
    }
    RocPoint pt{static_cast<double>(fp) / static_cast<double>(neg),
                static_cast<double>(tp) / static_cast<double>(pos), s};
    const auto& last = roc.points.back();
    roc.auc += (pt.fpr - last.fpr) * (pt.tpr + last.tpr) / 2.0;
    roc.points.push_back(pt);
  }
  return roc;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("percentile: no values");
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw ValidationError("summarize: no values");
  std::vector<double> v(values.begin(), values.end());
  Summary s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.median = percentile(v, 0.5);
  s.p95 = percentile(v, 0.95);
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  s.min = *mn;
  s.max = *mx;
  return s;
}

LatencyStats latency_stats(std::span<const StageTimings> samples) {
  if (samples.empty()) throw ValidationError("latency_stats: no samples");
  std::vector<double> c, u, r, t;
  for (const auto& s : samples) {
    c.push_back(s.classifier_ms);
    u.push_back(s.upstream_ms);
    r.push_back(s.redactor_ms);
    t.push_back(s.total_ms);
  }
  LatencyStats out;
  out.count = samples.size();
  out.classifier = summarize(c);
  out.upstream = summarize(u);
  out.redactor = summarize(r);
  out.total = summarize(t);
  return out;
}

}  // namespace ctiguard::metrics
