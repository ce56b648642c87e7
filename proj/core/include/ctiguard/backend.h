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

// Completion provider interface and the in-process implementations.

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ctiguard/ngram_model.h"

namespace ctiguard {

struct CompletionRequest {
  std::string prompt;
  // Optional overrides of the backend's default decoding parameters.
  std::optional<int> max_new_tokens;
  std::optional<double> temperature;
  std::optional<int> top_k;
  std::optional<std::uint64_t> seed;
  std::optional<bool> greedy;
};

/// Anything that turns a prompt into text. complete() throws BackendError on
/// failure and must be safe to call concurrently.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Decodes a continuation of the prompt with a trained NGramModel. The prompt
/// is tokenized on whitespace; the result contains only the new tokens.
class MockModelBackend : public CompletionBackend {
 public:
  MockModelBackend(std::shared_ptr<const NGramModel> model, DecodeParams defaults);

  std::string id() const override;
  std::string complete(const CompletionRequest& request) override;

  const DecodeParams& defaults() const { return defaults_; }
  DecodeParams effective_params(const CompletionRequest& request) const;

 private:
  std::shared_ptr<const NGramModel> model_;
  DecodeParams defaults_;
};

/// Test double: answers through a callback (or a fixed reply), counts calls
/// and can be told to fail.
class ScriptedBackend : public CompletionBackend {
 public:
  using Script = std::function<std::string(const CompletionRequest&)>;

  explicit ScriptedBackend(std::string reply, std::string id = "scripted");
  explicit ScriptedBackend(Script script, std::string id = "scripted");

  std::string id() const override { return id_; }
  std::string complete(const CompletionRequest& request) override;

  void set_failing(bool failing) { failing_ = failing; }
  std::size_t calls() const { return calls_.load(); }

 private:
  Script script_;
  std::string id_;
  std::atomic<bool> failing_{false};
  std::atomic<std::size_t> calls_{0};
};

/// Returns recorded outputs keyed by exact prompt; unknown prompts fail.
class ReplayBackend : public CompletionBackend {
 public:
  explicit ReplayBackend(std::map<std::string, std::string> recorded,
                         std::string id = "replay");

  std::string id() const override { return id_; }
  std::string complete(const CompletionRequest& request) override;

 private:
  std::map<std::string, std::string> recorded_;
  std::string id_;
};

}  // namespace ctiguard
