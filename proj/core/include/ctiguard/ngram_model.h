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

// Word-level memorizing n-gram model and the sampling decoder used as the
// desk-scale extraction target.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ctiguard {

struct Corpus;

using TokenId = std::uint32_t;

struct DecodeParams {
  int top_k = 40;
  double temperature = 0.5;
  double repetition_penalty = 1.3;
  int no_repeat_ngram = 3;  // 0 disables the constraint
  int max_new_tokens = 256;
  std::uint64_t rng_seed = 0;
  bool greedy = false;

  /// Throws ValidationError when an invariant is violated.
  void validate() const;
  bool operator==(const DecodeParams&) const = default;
};

struct NllResult {
  double value = 0.0;  // +inf when some step has probability zero
  std::optional<std::size_t> infinite_at;  // token index of that step
};

/// Per-step view of the decoder, for tests and tracing.
struct DecodeStep {
  /// Candidates that survived masking and top-k, with their final sampling
  /// probabilities, in descending order.
  std::vector<std::pair<TokenId, double>> support;
  /// Candidates after penalty and masking, before top-k, descending.
  std::vector<std::pair<TokenId, double>> ranked;
  TokenId chosen;
};

class NGramModel {
 public:
  /// Marks the end of a record. Never emitted by decode().
  static constexpr std::string_view kEndOfRecord = "\x04";
  static constexpr double kBackoffFactor = 0.4;

  /// Trains on the whitespace tokens of each record's "prompt response".
  static NGramModel train(const Corpus& corpus, int order);
  static NGramModel train_texts(std::span<const std::string> texts, int order);

  int order() const { return order_; }
  std::size_t vocabulary_size() const { return vocab_.size(); }
  const std::string& token(TokenId id) const { return vocab_.at(id); }
  std::optional<TokenId> id(std::string_view token) const;
  TokenId end_of_record() const { return eos_; }

  struct Distribution {
    std::vector<std::pair<TokenId, double>> probs;  // p > 0, by token id
    std::size_t context_used = 0;  // suffix length that matched; 0 = unigram
    double backoff_weight = 1.0;   // kBackoffFactor^(levels skipped)
  };

  /// Maximum-likelihood distribution under the longest context suffix
  /// (length <= order-1) seen in training; unigram if none matches.
  Distribution distribution(std::span<const TokenId> context) const;
  std::map<std::string, double> next_distribution(std::span<const std::string> context) const;

  std::vector<std::string> decode(std::span<const std::string> prefix, const DecodeParams& params,
                                  const std::function<void(const DecodeStep&)>& observer = {}) const;

  /// Negative log-likelihood of tokens[1..] given their history.
  NllResult nll(std::span<const std::string> tokens) const;

  std::string to_json() const;
  static NGramModel from_json(std::string_view json);

  bool operator==(const NGramModel& other) const;

 private:
  using Counts = std::map<TokenId, std::uint64_t>;

  NGramModel() = default;
  TokenId intern(const std::string& tok);
  std::vector<TokenId> lookup(std::span<const std::string> tokens) const;

  int order_ = 2;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId eos_ = 0;
  // tables_[n] maps a context of n tokens to next-token counts; n = 0 is the
  // unigram table (no end-of-record entries).
  std::vector<std::map<std::vector<TokenId>, Counts>> tables_;
};

}  // namespace ctiguard
