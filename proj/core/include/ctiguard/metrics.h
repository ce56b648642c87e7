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


// Evaluation metrics: leakage rate per entity category, text similarity,
// classifier quality, ROC, and latency summaries.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctiguard/corpus.h"
#include "ctiguard/entity.h"
#include "ctiguard/guard.h"

namespace ctiguard::metrics {

struct CategoryLeakage {
  std::set<std::string> matched;  // normalized, subset of the inventory
  std::size_t matched_count = 0;
  std::size_t inventory_count = 0;
  std::optional<double> rate;     // percent; empty when the inventory is empty
  std::size_t raw_exact_count = 0;  // matches on the surface string as written

  bool operator==(const CategoryLeakage&) const = default;
};

struct LeakageReport {
  std::map<EntityKind, CategoryLeakage> categories;
  std::size_t extracted_total = 0;

  const CategoryLeakage& at(EntityKind kind) const { return categories.at(kind); }
  bool operator==(const LeakageReport&) const = default;
};

/// Exact matching of normalized extractions against the inventory.
LeakageReport leakage(std::span<const EntitySpan> extracted, const SensitiveInventory& inventory);

/// Sentence BLEU over whitespace tokens, n = 1..4. Zero match counts are
/// smoothed to 1/(total+1); a candidate too short for an order contributes 1.
/// Throws ValidationError on empty input.
double bleu(std::string_view candidate, std::string_view reference);

/// ROUGE-L F1 over whitespace tokens. Throws ValidationError on empty input.
double rouge_l(std::string_view candidate, std::string_view reference);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string id() const = 0;
  /// Fixed-length vector; throws BackendError on failure.
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Term frequencies of lowercased whitespace tokens hashed into `dim` buckets.
class TfHashEmbedder : public Embedder {
 public:
  explicit TfHashEmbedder(std::size_t dim = 1u << 16);
  std::string id() const override;
  std::vector<double> embed(std::string_view text) const override;
  std::size_t bucket(std::string_view token) const;

 private:
  std::size_t dim_;
};

/// Dot product of the two unit-normalized embeddings; 0 if either is zero.
double cosine(std::string_view a, std::string_view b, const Embedder& embedder);

struct ClassifierEval {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0, precision = 0, recall = 0, f1 = 0, fpr = 0, fnr = 0;  // percent

  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Harmful is the positive class. Rates with a zero denominator are 0.
ClassifierEval classifier_eval(std::span<const Verdict> predicted, std::span<const Label> labels);
ClassifierEval classifier_eval(std::span<const Label> predicted, std::span<const Label> labels);

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
  double threshold = 0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1)
  double auc = 0;
};

/// Sweeps thresholds over the distinct scores, highest first. Tied scores
/// form one diagonal step, which counts ties as half. Throws ValidationError
/// unless both classes are present.
RocCurve roc_auc(std::span<const std::pair<double, Label>> scored);

struct Summary {
  double mean = 0;
  double median = 0;
  double p95 = 0;
  double min = 0;
  double max = 0;
};

/// Linear-interpolated percentile, q in [0,1].
double percentile(std::vector<double> values, double q);
Summary summarize(std::span<const double> values);

struct LatencyStats {
  std::size_t count = 0;
  Summary classifier, upstream, redactor, total;
};

LatencyStats latency_stats(std::span<const StageTimings> samples);

}  // namespace ctiguard::metrics
