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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ctiguard/errors.h"
#include "ctiguard/metrics.h"
#include "oracles.h"

using namespace ctiguard;
using namespace ctiguard::metrics;

namespace {

EntitySpan span(EntityKind k, std::string n) { return {k, 0, n.size(), n, n}; }

std::string random_sentence(std::mt19937& rng, std::size_t max_len) {
  static const char* words[] = {"the", "cat", "sat", "on", "mat", "a", "dog", "ran", "C2", "host"};
  std::size_t len = 1 + rng() % max_len;
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) s += " ";
    s += words[rng() % 10];
  }
  return s;
}

}  // namespace

TEST(Leakage, Examples) {
  SensitiveInventory inv;
  inv.add(EntityKind::kPortNumber, "80");
  inv.add(EntityKind::kPortNumber, "443");
  inv.add(EntityKind::kIpAddress, "1.2.3.4");
  std::vector<EntitySpan> ex = {span(EntityKind::kPortNumber, "443")};
  auto r = leakage(ex, inv);
  EXPECT_DOUBLE_EQ(*r.at(EntityKind::kPortNumber).rate, 50.0);
  EXPECT_DOUBLE_EQ(*r.at(EntityKind::kIpAddress).rate, 0.0);
  EXPECT_FALSE(r.at(EntityKind::kEmailAddress).rate.has_value());

  std::vector<EntitySpan> none;
  r = leakage(none, inv);
  EXPECT_DOUBLE_EQ(*r.at(EntityKind::kPortNumber).rate, 0.0);

  std::vector<EntitySpan> all = {span(EntityKind::kPortNumber, "80"),
                                 span(EntityKind::kPortNumber, "443"),
                                 span(EntityKind::kPortNumber, "8080"),
                                 span(EntityKind::kPortNumber, "443")};
  r = leakage(all, inv);
  EXPECT_DOUBLE_EQ(*r.at(EntityKind::kPortNumber).rate, 100.0);
  EXPECT_EQ(r.at(EntityKind::kPortNumber).matched_count, 2u);
}

TEST(Leakage, RawVersusNormalizedCounts) {
  SensitiveInventory inv;
  inv.add(EntityKind::kIpAddress, "1.2.3.4");
  std::vector<EntitySpan> ex = {{EntityKind::kIpAddress, 0, 13, "1[.]2[.]3[.]4", "1.2.3.4"}};
  auto r = leakage(ex, inv);
  EXPECT_EQ(r.at(EntityKind::kIpAddress).matched_count, 1u);
  EXPECT_EQ(r.at(EntityKind::kIpAddress).raw_exact_count, 0u);
}

TEST(Leakage, MatchesSetIntersectionOracle) {
  std::mt19937 rng(3);
  for (int iter = 0; iter < 200; ++iter) {
    SensitiveInventory inv;
    std::map<EntityKind, std::set<std::string>> inv_sets, ex_sets;
    std::vector<EntitySpan> ex;
    for (auto k : kAllEntityKinds) {
      int n_inv = static_cast<int>(rng() % 6);
      for (int i = 0; i < n_inv; ++i) {
        auto v = "e" + std::to_string(rng() % 10);
        inv.add(k, v);
        inv_sets[k].insert(v);
      }
      int n_ex = static_cast<int>(rng() % 8);
      for (int i = 0; i < n_ex; ++i) {
        auto v = "e" + std::to_string(rng() % 10);
        ex.push_back(span(k, v));
        ex_sets[k].insert(v);
      }
    }
    auto r = leakage(ex, inv);
    EXPECT_EQ(r.extracted_total, ex.size());
    for (auto k : kAllEntityKinds) {
      auto expect = oracle::intersect(inv_sets[k], ex_sets[k]);
      const auto& c = r.at(k);
      EXPECT_EQ(c.matched, expect);
      EXPECT_EQ(c.inventory_count, inv_sets[k].size());
      if (inv_sets[k].empty()) {
        EXPECT_FALSE(c.rate.has_value());
      } else {
        EXPECT_DOUBLE_EQ(*c.rate, 100.0 * expect.size() / inv_sets[k].size());
      }
    }
  }
}

TEST(Bleu, Examples) {
  EXPECT_NEAR(bleu("the cat sat on the mat", "the cat sat on the mat"), 1.0, 1e-12);
  // brevity penalty e^(1-4/3); p1=p2=p3=1, p4 has no candidate 4-grams -> 1
  EXPECT_NEAR(bleu("the cat sat", "the cat sat down"), std::exp(1.0 - 4.0 / 3.0), 1e-12);
  // disjoint 3-token pair: p1=1/4, p2=1/3, p3=1/2, p4=1 -> (1/24)^(1/4)
  EXPECT_NEAR(bleu("a b c", "x y z"), std::pow(1.0 / 24.0, 0.25), 1e-12);
  EXPECT_THROW(bleu("", "x"), ValidationError);
  EXPECT_THROW(bleu("x", "  "), ValidationError);
}

TEST(RougeL, Examples) {
  EXPECT_DOUBLE_EQ(rouge_l("a b c", "a b c"), 1.0);
  EXPECT_DOUBLE_EQ(rouge_l("a b c", "x y z"), 0.0);
  EXPECT_DOUBLE_EQ(rouge_l("a b c d", "a c d e"), 0.75);
  EXPECT_THROW(rouge_l("", "a"), ValidationError);
}

TEST(Cosine, Examples) {
  TfHashEmbedder e;
  EXPECT_NEAR(cosine("the cat", "the cat", e), 1.0, 1e-9);
  EXPECT_NEAR(cosine("a b", "c d", e), 0.0, 1e-12);
  EXPECT_NEAR(cosine("a b", "a c", e), 0.5, 1e-12);
  EXPECT_EQ(cosine("", "a", e), 0.0);
  EXPECT_EQ(e.embed("x").size(), 1u << 16);
}

TEST(Property, TextMetricsMatchOracles) {
  std::mt19937 rng(17);
  TfHashEmbedder e;
  for (int iter = 0; iter < 300; ++iter) {
    auto a = random_sentence(rng, 12);
    auto b = random_sentence(rng, 12);
    EXPECT_NEAR(bleu(a, b), oracle::bleu(a, b), 1e-9) << a << " | " << b;
    EXPECT_NEAR(rouge_l(a, b), oracle::rouge_l(a, b), 1e-9) << a << " | " << b;
    auto ta = oracle::toks(a), tb = oracle::toks(b);
    EXPECT_EQ(lcs_length(ta, tb), oracle::lcs_exhaustive(ta, tb));
    EXPECT_NEAR(cosine(a, b, e), oracle::cosine_tf(a, b), 1e-9) << a << " | " << b;
    EXPECT_NEAR(rouge_l(a, a), 1.0, 1e-12);
  }
}

TEST(ClassifierEval, Examples) {
  using L = Label;
  std::vector<L> labels = {L::kHarmful, L::kHarmful, L::kHarmless, L::kHarmless};
  auto perfect = classifier_eval(std::span<const L>(labels), std::span<const L>(labels));
  EXPECT_DOUBLE_EQ(perfect.accuracy, 100);
  EXPECT_DOUBLE_EQ(perfect.fpr, 0);
  EXPECT_DOUBLE_EQ(perfect.fnr, 0);

  std::vector<L> pred = {L::kHarmful, L::kHarmless, L::kHarmful, L::kHarmless};
  auto half = classifier_eval(std::span<const L>(pred), std::span<const L>(labels));
  EXPECT_DOUBLE_EQ(half.accuracy, 50);
  EXPECT_DOUBLE_EQ(half.fpr, 50);
  EXPECT_DOUBLE_EQ(half.fnr, 50);
  EXPECT_EQ(half.total(), 4u);

  std::vector<L> two = {L::kHarmful, L::kHarmless};
  std::vector<L> all_h = {L::kHarmful, L::kHarmful};
  auto eager = classifier_eval(std::span<const L>(all_h), std::span<const L>(two));
  EXPECT_DOUBLE_EQ(eager.recall, 100);
  EXPECT_DOUBLE_EQ(eager.fpr, 100);
  EXPECT_DOUBLE_EQ(eager.precision, 50);

  std::vector<L> all_n = {L::kHarmless, L::kHarmless};
  auto shy = classifier_eval(std::span<const L>(all_n), std::span<const L>(two));
  EXPECT_DOUBLE_EQ(shy.precision, 0);  // undefined, reported as 0
  EXPECT_DOUBLE_EQ(shy.f1, 0);

  EXPECT_THROW(classifier_eval(std::span<const L>(pred), std::span<const L>(two)),
               ValidationError);
  std::vector<L> empty;
  EXPECT_THROW(classifier_eval(std::span<const L>(empty), std::span<const L>(empty)),
               ValidationError);
}

TEST(Roc, Examples) {
  using L = Label;
  std::vector<std::pair<double, L>> sep = {{9, L::kHarmful}, {8, L::kHarmful}, {-8, L::kHarmless}};
  EXPECT_DOUBLE_EQ(roc_auc(sep).auc, 1.0);
  std::vector<std::pair<double, L>> flat = {{1, L::kHarmful}, {1, L::kHarmless}, {1, L::kHarmful}};
  EXPECT_DOUBLE_EQ(roc_auc(flat).auc, 0.5);
  std::vector<std::pair<double, L>> mixed = {
      {3, L::kHarmful}, {2, L::kHarmless}, {2, L::kHarmful}, {1, L::kHarmless}};
  // pairs: (3>2),(3>1),(2~2),(2>1) -> 3.5/4
  EXPECT_DOUBLE_EQ(roc_auc(mixed).auc, 0.875);
  auto pts = roc_auc(mixed).points;
  EXPECT_EQ(pts.front().fpr, 0);
  EXPECT_EQ(pts.front().tpr, 0);
  EXPECT_EQ(pts.back().fpr, 1);
  EXPECT_EQ(pts.back().tpr, 1);
  std::vector<std::pair<double, L>> one = {{1, L::kHarmful}};
  EXPECT_THROW(roc_auc(one), ValidationError);
}

TEST(Property, AucEqualsMannWhitney) {
  std::mt19937 rng(5);
  for (int iter = 0; iter < 1000; ++iter) {
    std::size_t n = 2 + rng() % 30;
    std::vector<std::pair<double, Label>> s;
    std::vector<std::pair<double, bool>> o;
    for (std::size_t i = 0; i < n; ++i) {
      bool pos = i == 0 ? true : (i == 1 ? false : rng() % 2 == 0);
      double score = static_cast<double>(static_cast<int>(rng() % 21) - 10);
      s.emplace_back(score, pos ? Label::kHarmful : Label::kHarmless);
      o.emplace_back(score, pos);
    }
    auto c = roc_auc(s);
    EXPECT_NEAR(c.auc, oracle::mann_whitney(o), 1e-9);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      EXPECT_GE(c.points[i].fpr, c.points[i - 1].fpr);
      EXPECT_GE(c.points[i].tpr, c.points[i - 1].tpr);
    }
  }
}

TEST(Latency, Percentiles) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  auto s = summarize(v);
  EXPECT_DOUBLE_EQ(s.median, 50.5);
  EXPECT_NEAR(s.p95, 95.05, 1e-9);
  EXPECT_DOUBLE_EQ(s.mean, 50.5);
  EXPECT_DOUBLE_EQ(s.min, 1);
  EXPECT_DOUBLE_EQ(s.max, 100);
  std::vector<double> one = {7.5};
  auto t = summarize(one);
  EXPECT_EQ(t.mean, 7.5);
  EXPECT_EQ(t.median, 7.5);
  EXPECT_EQ(t.p95, 7.5);
  std::vector<double> none;
  EXPECT_THROW(summarize(none), ValidationError);

  std::mt19937 rng(8);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> x;
    for (std::size_t i = 0, n = 1 + rng() % 40; i < n; ++i) x.push_back(rng() % 1000 / 7.0);
    for (double q : {0.0, 0.5, 0.95, 1.0}) EXPECT_NEAR(percentile(x, q), oracle::percentile(x, q), 1e-9);
    auto sm = summarize(x);
    EXPECT_GE(sm.p95, sm.median);
  }
}

TEST(Latency, StageStats) {
  std::vector<StageTimings> t = {{1, 10, 2, 13}, {3, 20, 4, 27}};
  auto s = latency_stats(t);
  EXPECT_EQ(s.count, 2u);
  EXPECT_DOUBLE_EQ(s.classifier.mean, 2);
  EXPECT_DOUBLE_EQ(s.upstream.median, 15);
  EXPECT_DOUBLE_EQ(s.total.max, 27);
  std::vector<StageTimings> none;
  EXPECT_THROW(latency_stats(none), ValidationError);
}
