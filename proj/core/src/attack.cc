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

#include "ctiguard/attack.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string Prefix::text() const { return text::join(tokens, " "); }

PrefixSet craft_prefixes(const Corpus& corpus, const ioc::Scanner& scanner,
                         std::size_t prefix_len) {
  if (prefix_len < 1) throw ValidationError("craft_prefixes: prefix_len must be >= 1");
  PrefixSet set;
  for (const auto& r : corpus.records) {
    std::string sanitized = ioc::elide_all(scanner, r.text());
    auto tokens = text::split_whitespace(sanitized);
    if (tokens.size() < prefix_len) {
      set.skipped.push_back(r.id);
      continue;
    }
    tokens.resize(prefix_len);
    set.prefixes.push_back({r.id, std::move(tokens), std::move(sanitized)});
  }
  return set;
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t index, std::size_t sample) {
  if (index == 0 && sample == 0) return base;
  return splitmix64(base ^ splitmix64((static_cast<std::uint64_t>(index) << 20) ^ sample));
}

ExtractionRun run_extraction(CompletionBackend& target, const std::vector<Prefix>& prefixes,
                             const DecodeParams& params, const ioc::Scanner& scanner,
                             const ExtractionOptions& options) {
  params.validate();
  if (options.samples < 1) throw ValidationError("run_extraction: samples must be >= 1");
  ExtractionRun run;
  run.manifest.target_id = target.id();
  run.manifest.params = params;
  run.manifest.samples = options.samples;
  run.manifest.prefix_count = prefixes.size();

  const std::size_t jobs = prefixes.size() * options.samples;
  run.generations.resize(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      std::size_t index = j / options.samples;
      std::size_t sample = j % options.samples;
      GenerationRecord& g = run.generations[j];
      g.prefix = prefixes[index];
      g.sample = sample;
      g.decode_params = params;
      g.decode_params.rng_seed = derive_seed(params.rng_seed, index, sample);

      CompletionRequest req;
      req.prompt = g.prefix.text();
      req.max_new_tokens = g.decode_params.max_new_tokens;
      req.temperature = g.decode_params.temperature;
      req.top_k = g.decode_params.top_k;
      req.seed = g.decode_params.rng_seed;
      req.greedy = g.decode_params.greedy;
      auto t0 = std::chrono::steady_clock::now();
      try {
        g.output = target.complete(req);
        g.extracted = scanner.scan(g.output);
      } catch (const std::exception& e) {
        g.error = e.what();
      }
      g.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::size_t threads = std::clamp<std::size_t>(options.parallelism, 1, std::max<std::size_t>(jobs, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& g : run.generations) {
    if (g.error) ++run.manifest.failures;
  }
  if (jobs > 0 && run.manifest.failures == jobs) {
    throw BackendError("run_extraction: all " + std::to_string(jobs) +
                       " generations failed; first error: " + *run.generations.front().error);
  }
  return run;
}

bool memorization_check(const Record& record, const GenerationRecord& generation) {
  auto original = text::split_whitespace(record.text());
  std::size_t j = 0;
  for (const auto& t : generation.prefix.tokens) {
    while (j < original.size() && original[j] != t) ++j;
    if (j == original.size()) return false;
    ++j;
  }
  std::size_t want = std::min(original.size() - j,
                              static_cast<std::size_t>(generation.decode_params.max_new_tokens));
  auto out = text::split_whitespace(generation.output);
  if (out.size() < want) return false;
  return std::equal(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(want),
                    original.begin() + static_cast<std::ptrdiff_t>(j));
}

std::vector<EntitySpan> all_extracted(const ExtractionRun& run) {
  std::vector<EntitySpan> out;
  for (const auto& g : run.generations) out.insert(out.end(), g.extracted.begin(), g.extracted.end());
  return out;
}

}  // namespace ctiguard
