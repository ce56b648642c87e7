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

// Privacy guard: a few-shot prompt classifier in front of the model and a
// few-shot redactor behind it, with rule-based engines as the floor when the
// guard provider is unavailable or answers off-grammar.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctiguard/backend.h"
#include "ctiguard/entity.h"
#include "ctiguard/ioc_detect.h"

namespace ctiguard {

enum class Label { kHarmful, kHarmless };
enum class Engine { kProvider, kFallback };

std::string_view to_string(Label label);
std::string_view to_string(Engine engine);
std::optional<Label> label_from_string(std::string_view s);

struct Verdict {
  Label label = Label::kHarmless;
  int confidence = 1;  // 1..10
  std::string rationale;
  Engine engine = Engine::kFallback;

  /// Signed harmfulness: +confidence if harmful, -confidence otherwise.
  int score() const { return label == Label::kHarmful ? confidence : -confidence; }

  bool operator==(const Verdict&) const = default;
};

enum class PromptCategory { kDirect, kIndirect, kDisguised, kHarmless };
inline constexpr PromptCategory kAllPromptCategories[] = {
    PromptCategory::kDirect, PromptCategory::kIndirect, PromptCategory::kDisguised,
    PromptCategory::kHarmless};

std::string_view to_string(PromptCategory category);
std::optional<PromptCategory> prompt_category_from_string(std::string_view s);
inline Label expected_label(PromptCategory c) {
  return c == PromptCategory::kHarmless ? Label::kHarmless : Label::kHarmful;
}

struct ClassifierShot {
  PromptCategory category;
  std::string prompt;
  std::string response;
};

struct RedactorShot {
  std::string input;
  std::string output;
};

struct FewShotSet {
  std::string version;
  std::vector<ClassifierShot> classifier;
  std::vector<RedactorShot> redactor;

  /// The default demonstrations, shipped verbatim.
  static const FewShotSet& builtin();
  static FewShotSet from_json(std::string_view json);
  static FewShotSet load(const std::filesystem::path& path);
  std::string to_json() const;

  /// Throws ValidationError if a category is empty or a redactor output
  /// still contains an entity.
  void validate(const ioc::Scanner& scanner) const;

  /// FNV-1a over the canonical JSON form.
  std::uint64_t checksum() const;

  std::vector<const ClassifierShot*> in_category(PromptCategory category) const;
};

inline constexpr std::string_view kClassifierTemplateVersion = "ctiguard-classifier/1";
inline constexpr std::string_view kRedactorTemplateVersion = "ctiguard-redactor/1";
inline constexpr std::string_view kDefaultRefusalMessage =
    "This request may expose sensitive information and has been declined.";

std::string build_classifier_prompt(std::string_view user_prompt, const FewShotSet& shots);
std::string build_redactor_prompt(std::string_view text, const FewShotSet& shots);

/// Accepts "LABEL|CONFIDENCE|REASON" or prose ("Harmful because ...",
/// "Harmless as ..."), the latter with confidence 10. Throws ParseError.
Verdict parse_verdict(std::string_view raw);

/// Rule engine. Harmful on (a) a request verb aimed at a sensitive noun or a
/// sentence left hanging on one, (b) a trailing partial entity, (c) a framing
/// phrase next to a sensitive noun.
Verdict fallback_classify(std::string_view prompt, const ioc::Scanner& scanner);

struct RedactionResult {
  std::string text;
  std::vector<EntitySpan> removed;  // empty for provider output unless verification elided
  Engine engine = Engine::kFallback;
  bool residual_pass = false;  // verification had to elide entities the provider kept
};

RedactionResult fallback_redact(std::string_view text, const ioc::Scanner& scanner);

/// Drops angle-bracket category markers such as <IP_Address> and repairs the
/// spacing around them.
std::string strip_placeholders(std::string_view text);

struct StageTimings {
  double classifier_ms = 0.0;
  double upstream_ms = 0.0;
  double redactor_ms = 0.0;
  double total_ms = 0.0;
};

enum class GuardStatus { kRefused, kOk, kError };
std::string_view to_string(GuardStatus status);

struct GuardedResponse {
  GuardStatus status = GuardStatus::kError;
  std::string text;
  Verdict verdict;
  StageTimings timings;
  Engine redactor_engine = Engine::kFallback;
  std::optional<std::string> error;
};

struct GuardOptions {
  std::string refusal_message{kDefaultRefusalMessage};
  /// Re-scan provider rewrites and elide what survived.
  bool verify = true;
};

/// Shares an immutable few-shot set and detector across requests; every
/// method is safe to call concurrently. A null provider selects the rule
/// engines directly.
class Guard {
 public:
  Guard();
  Guard(std::shared_ptr<const FewShotSet> shots, std::shared_ptr<const ioc::Scanner> scanner,
        GuardOptions options = {});

  Verdict classify(std::string_view prompt, CompletionBackend* provider) const;
  RedactionResult redact(std::string_view text, CompletionBackend* provider) const;

  /// Refuses harmful prompts without calling upstream; otherwise completes and
  /// redacts. Upstream failure yields kError with empty text.
  GuardedResponse guarded_complete(std::string_view prompt, CompletionBackend& upstream,
                                   CompletionBackend* provider,
                                   std::optional<int> max_tokens = std::nullopt) const;

  const FewShotSet& shots() const { return *shots_; }
  const ioc::Scanner& scanner() const { return *scanner_; }
  const GuardOptions& options() const { return options_; }

 private:
  std::shared_ptr<const FewShotSet> shots_;
  std::shared_ptr<const ioc::Scanner> scanner_;
  GuardOptions options_;
};

/// Presents a guarded upstream as a plain backend, so the extraction attack
/// can be replayed against the defended pipeline. Refusals come back as the
/// refusal message; upstream errors as BackendError.
class GuardedBackend : public CompletionBackend {
 public:
  GuardedBackend(std::shared_ptr<const Guard> guard, std::shared_ptr<CompletionBackend> upstream,
                 std::shared_ptr<CompletionBackend> provider = nullptr);

  std::string id() const override;
  std::string complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<const Guard> guard_;
  std::shared_ptr<CompletionBackend> upstream_;
  std::shared_ptr<CompletionBackend> provider_;
};

}  // namespace ctiguard
