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

// Prefix-based training-data extraction: sanitize records the way an outside
// attacker would see them, query a target with the leading tokens, and keep
// the generations for leakage scoring.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctiguard/backend.h"
#include "ctiguard/corpus.h"
#include "ctiguard/entity.h"
#include "ctiguard/ioc_detect.h"
#include "ctiguard/ngram_model.h"

namespace ctiguard {

inline constexpr std::size_t kDefaultPrefixLength = 6;

struct Prefix {
  std::string record_id;
  std::vector<std::string> tokens;
  std::string source_sanitized;

  std::string text() const;
};

struct PrefixSet {
  std::vector<Prefix> prefixes;
  std::vector<std::string> skipped;  // ids of records with too few tokens
};

PrefixSet craft_prefixes(const Corpus& corpus, const ioc::Scanner& scanner,
                         std::size_t prefix_len = kDefaultPrefixLength);

struct GenerationRecord {
  Prefix prefix;
  std::size_t sample = 0;
  std::string output;
  DecodeParams decode_params;
  std::vector<EntitySpan> extracted;
  double latency_ms = 0.0;
  std::optional<std::string> error;
};

struct RunManifest {
  std::string target_id;
  DecodeParams params;
  std::size_t samples = 1;
  std::size_t prefix_count = 0;
  std::size_t failures = 0;
};

struct ExtractionRun {
  RunManifest manifest;
  std::vector<GenerationRecord> generations;  // prefix-major, then sample
};

struct ExtractionOptions {
  std::size_t parallelism = 1;
  std::size_t samples = 1;
};

/// Seed for sample `sample` of prefix `index`; sample 0 of prefix 0 uses the
/// base seed unchanged.
std::uint64_t derive_seed(std::uint64_t base, std::size_t index, std::size_t sample);

/// Queries `target` once per prefix and sample. Backend failures are recorded
/// per generation; throws BackendError only if every call fails.
ExtractionRun run_extraction(CompletionBackend& target, const std::vector<Prefix>& prefixes,
                             const DecodeParams& params, const ioc::Scanner& scanner,
                             const ExtractionOptions& options = {});

/// True iff the output starts with the record's true continuation after the
/// prefix, compared up to min(len(suffix), max_new_tokens) tokens.
bool memorization_check(const Record& record, const GenerationRecord& generation);

std::vector<EntitySpan> all_extracted(const ExtractionRun& run);

}  // namespace ctiguard
