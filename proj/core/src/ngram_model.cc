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

#include "ctiguard/ngram_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "ctiguard/corpus.h"
#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard {
namespace {

constexpr TokenId kUnknown = std::numeric_limits<TokenId>::max();
constexpr int kFormatVersion = 1;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void DecodeParams::validate() const {
  if (top_k < 1) throw ValidationError("decode: top_k must be >= 1");
  if (!greedy && !(temperature > 0.0)) {
    throw ValidationError("decode: temperature must be > 0 unless greedy");
  }
  if (repetition_penalty < 1.0) throw ValidationError("decode: repetition_penalty must be >= 1");
  if (no_repeat_ngram < 0) throw ValidationError("decode: no_repeat_ngram must be >= 0");
  if (max_new_tokens < 1) throw ValidationError("decode: max_new_tokens must be >= 1");
}

TokenId NGramModel::intern(const std::string& tok) {
  auto [it, inserted] = index_.emplace(tok, static_cast<TokenId>(vocab_.size()));
  if (inserted) vocab_.push_back(tok);
  return it->second;
}

std::optional<TokenId> NGramModel::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TokenId> NGramModel::lookup(std::span<const std::string> tokens) const {
  std::vector<TokenId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto it = index_.find(t);
    out.push_back(it == index_.end() ? kUnknown : it->second);
  }
  return out;
}

NGramModel NGramModel::train_texts(std::span<const std::string> texts, int order) {
  if (order < 2) throw ValidationError("train: order must be >= 2");
  NGramModel m;
  m.order_ = order;
  m.tables_.resize(static_cast<std::size_t>(order));

  std::vector<std::vector<TokenId>> docs;
  std::size_t total = 0;
  for (const auto& t : texts) {
    std::vector<TokenId> ids;
    for (const auto& tok : text::split_whitespace(t)) ids.push_back(m.intern(tok));
    total += ids.size();
    docs.push_back(std::move(ids));
  }
  if (total < static_cast<std::size_t>(order)) {
    throw TrainingError("train: corpus has " + std::to_string(total) +
                        " tokens, fewer than the model order " + std::to_string(order));
  }
  m.eos_ = m.intern(std::string(kEndOfRecord));

  for (auto& doc : docs) {
    for (TokenId t : doc) ++m.tables_[0][{}][t];
    doc.push_back(m.eos_);
    for (std::size_t i = 1; i < doc.size(); ++i) {
      for (std::size_t n = 1; n < static_cast<std::size_t>(order) && n <= i; ++n) {
        std::vector<TokenId> ctx(doc.begin() + static_cast<std::ptrdiff_t>(i - n),
                                 doc.begin() + static_cast<std::ptrdiff_t>(i));
        ++m.tables_[n][ctx][doc[i]];
      }
    }
  }
  return m;
}

NGramModel NGramModel::train(const Corpus& corpus, int order) {
  std::vector<std::string> texts;
  texts.reserve(corpus.records.size());
  for (const auto& r : corpus.records) texts.push_back(r.text());
  return train_texts(texts, order);
}

NGramModel::Distribution NGramModel::distribution(std::span<const TokenId> context) const {
  Distribution d;
  std::size_t max_len = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  const Counts* counts = nullptr;
  for (std::size_t len = max_len; len >= 1; --len) {
    auto ctx = context.subspan(context.size() - len);
    if (std::find(ctx.begin(), ctx.end(), kUnknown) != ctx.end()) continue;
    auto it = tables_[len].find(std::vector<TokenId>(ctx.begin(), ctx.end()));
    if (it != tables_[len].end()) {
      counts = &it->second;
      d.context_used = len;
      break;
    }
  }
  if (!counts) {
    auto it = tables_[0].find({});
    if (it == tables_[0].end()) return d;
    counts = &it->second;
    d.context_used = 0;
  }
  d.backoff_weight = std::pow(kBackoffFactor, static_cast<double>(max_len - d.context_used));
  std::uint64_t total = 0;
  for (const auto& [tok, c] : *counts) total += c;
  for (const auto& [tok, c] : *counts) {
    d.probs.emplace_back(tok, static_cast<double>(c) / static_cast<double>(total));
  }
  return d;
}

std::map<std::string, double> NGramModel::next_distribution(
    std::span<const std::string> context) const {
  if (context.empty()) throw ValidationError("next_distribution: context must be non-empty");
  auto ids = lookup(context);
  std::map<std::string, double> out;
  for (const auto& [tok, p] : distribution(ids).probs) out[vocab_[tok]] = p;
  return out;
}

std::vector<std::string> NGramModel::decode(
    std::span<const std::string> prefix, const DecodeParams& params,
    const std::function<void(const DecodeStep&)>& observer) const {
  params.validate();
  if (prefix.empty()) throw ValidationError("decode: prefix must be non-empty");

  std::vector<TokenId> history = lookup(prefix);
  std::set<TokenId> present(history.begin(), history.end());
  const auto n = static_cast<std::size_t>(params.no_repeat_ngram);
  std::set<std::vector<TokenId>> seen_ngrams;
  auto record_ngram_ending_at = [&](std::size_t end) {
    if (n == 0 || end < n) return;
    seen_ngrams.emplace(history.begin() + static_cast<std::ptrdiff_t>(end - n),
                        history.begin() + static_cast<std::ptrdiff_t>(end));
  };
  for (std::size_t i = n; i <= history.size(); ++i) record_ngram_ending_at(i);

  std::mt19937_64 rng(params.rng_seed);
  std::vector<std::string> out;
  std::vector<TokenId> probe;
  for (int step = 0; step < params.max_new_tokens; ++step) {
    Distribution dist = distribution(history);

    // Scores after repetition penalty, with no-repeat masking.
    std::vector<std::pair<TokenId, double>> scored;
    for (const auto& [tok, p] : dist.probs) {
      double s = std::log(p);
      if (present.count(tok)) {
        s = s < 0 ? s * params.repetition_penalty : s / params.repetition_penalty;
      }
      if (n > 0 && history.size() + 1 >= n) {
        probe.assign(history.end() - static_cast<std::ptrdiff_t>(n - 1), history.end());
        probe.push_back(tok);
        if (seen_ngrams.count(probe)) continue;
      }
      scored.emplace_back(tok, s);
    }
    if (scored.empty()) break;
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    DecodeStep trace;
    TokenId chosen;
    if (params.greedy) {
      chosen = scored.front().first;
      if (observer) {
        for (const auto& [tok, s] : scored) trace.ranked.emplace_back(tok, s);
        trace.support = {{chosen, 1.0}};
      }
    } else {
      const double t = params.temperature;
      const double top = scored.front().second / t;
      std::vector<double> weights;
      weights.reserve(scored.size());
      double all = 0.0;
      for (const auto& [tok, s] : scored) {
        weights.push_back(std::exp(s / t - top));
        all += weights.back();
      }
      std::size_t k = std::min(scored.size(), static_cast<std::size_t>(params.top_k));
      double kept = 0.0;
      for (std::size_t i = 0; i < k; ++i) kept += weights[i];
      double u = uniform01(rng) * kept;
      std::size_t pick = k - 1;
      double acc = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        acc += weights[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
      chosen = scored[pick].first;
      if (observer) {
        for (std::size_t i = 0; i < scored.size(); ++i) {
          trace.ranked.emplace_back(scored[i].first, weights[i] / all);
        }
        for (std::size_t i = 0; i < k; ++i) {
          trace.support.emplace_back(scored[i].first, weights[i] / kept);
        }
      }
    }
    if (observer) {
      trace.chosen = chosen;
      observer(trace);
    }
    if (chosen == eos_) break;
    history.push_back(chosen);
    present.insert(chosen);
    record_ngram_ending_at(history.size());
    out.push_back(vocab_[chosen]);
  }
  return out;
}

NllResult NGramModel::nll(std::span<const std::string> tokens) const {
  if (tokens.size() < 2) throw ValidationError("nll: needs at least two tokens");
  auto ids = lookup(tokens);
  NllResult r;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    auto d = distribution(std::span<const TokenId>(ids).first(i));
    double p = 0.0;
    for (const auto& [tok, q] : d.probs) {
      if (tok == ids[i]) {
        p = q;
        break;
      }
    }
    if (p <= 0.0) {
      r.value = std::numeric_limits<double>::infinity();
      r.infinite_at = i;
      return r;
    }
    r.value -= std::log(p);
  }
  if (r.value == 0.0) r.value = 0.0;  // drop a negative zero
  return r;
}

std::string NGramModel::to_json() const {
  nlohmann::ordered_json doc;
  doc["format"] = "ctiguard-ngram";
  doc["version"] = kFormatVersion;
  doc["order"] = order_;
  doc["end_of_record"] = eos_;
  doc["vocab"] = vocab_;
  doc["tables"] = nlohmann::ordered_json::array();
  for (std::size_t len = 0; len < tables_.size(); ++len) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& [ctx, counts] : tables_[len]) {
      nlohmann::ordered_json next = nlohmann::ordered_json::array();
      for (const auto& [tok, c] : counts) next.push_back({tok, c});
      entries.push_back({ctx, next});
    }
    doc["tables"].push_back(entries);
  }
  return doc.dump();
}

NGramModel NGramModel::from_json(std::string_view json) {
  NGramModel m;
  try {
    auto doc = nlohmann::json::parse(json);
    if (doc.value("format", "") != "ctiguard-ngram") {
      throw ParseError("model: not a ctiguard-ngram file");
    }
    if (doc.at("version").get<int>() != kFormatVersion) {
      throw ParseError("model: unsupported version " + doc.at("version").dump());
    }
    m.order_ = doc.at("order").get<int>();
    if (m.order_ < 2) throw ParseError("model: order must be >= 2");
    for (const auto& tok : doc.at("vocab")) m.intern(tok.get<std::string>());
    m.eos_ = doc.at("end_of_record").get<TokenId>();
    if (m.eos_ >= m.vocab_.size()) throw ParseError("model: end_of_record out of range");
    const auto& tables = doc.at("tables");
    if (tables.size() != static_cast<std::size_t>(m.order_)) {
      throw ParseError("model: expected one table per context length");
    }
    m.tables_.resize(tables.size());
    for (std::size_t len = 0; len < tables.size(); ++len) {
      for (const auto& entry : tables[len]) {
        auto ctx = entry.at(0).get<std::vector<TokenId>>();
        if (ctx.size() != len) throw ParseError("model: context length mismatch");
        auto& counts = m.tables_[len][ctx];
        for (const auto& pair : entry.at(1)) {
          auto tok = pair.at(0).get<TokenId>();
          if (tok >= m.vocab_.size()) throw ParseError("model: token id out of range");
          counts[tok] = pair.at(1).get<std::uint64_t>();
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  return m;
}

bool NGramModel::operator==(const NGramModel& other) const {
  return order_ == other.order_ && vocab_ == other.vocab_ && eos_ == other.eos_ &&
         tables_ == other.tables_;
}

}  // namespace ctiguard
