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

#include <memory>
#include <set>

#include "ctiguard/attack.h"
#include "ctiguard/backend.h"
#include "ctiguard/errors.h"
#include "ctiguard/text.h"

using namespace ctiguard;

namespace {

struct Rig {
  ioc::Scanner scanner;
  Corpus corpus = generate_synthetic_corpus(7, 4, 4);
  std::shared_ptr<const NGramModel> model =
      std::make_shared<NGramModel>(NGramModel::train(corpus, 4));
  DecodeParams greedy() const {
    DecodeParams p;
    p.greedy = true;
    return p;
  }
};

}  // namespace

TEST(CraftPrefixes, SanitizesThenTruncates) {
  ioc::Scanner scanner;
  Corpus c;
  c.records.push_back({"r1", "The IP address", "192.168.1.1 was used in a attack.", {}, 0});
  c.records.push_back({"r2", "too", "short", {}, 0});
  auto set = craft_prefixes(c, scanner, 5);
  ASSERT_EQ(set.prefixes.size(), 1u);
  EXPECT_EQ(set.prefixes[0].tokens,
            (std::vector<std::string>{"The", "IP", "address", "was", "used"}));
  EXPECT_EQ(set.prefixes[0].source_sanitized, "The IP address was used in a attack.");
  EXPECT_EQ(set.skipped, std::vector<std::string>{"r2"});
  EXPECT_THROW(craft_prefixes(c, scanner, 0), ValidationError);
}

TEST(CraftPrefixes, NeverCarryEntities) {
  ioc::Scanner scanner;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticOptions o;
    o.seed = seed;
    o.records_per_category = 5;
    o.entities_per_category = 3;
    o.obfuscation_fraction = 0.6;
    auto corpus = generate_synthetic_corpus(o);
    for (std::size_t len : {1u, 3u, 6u, 12u, 40u}) {
      for (const auto& p : craft_prefixes(corpus, scanner, len).prefixes) {
        EXPECT_TRUE(scanner.scan(p.text()).empty()) << p.text();
        EXPECT_EQ(p.tokens.size(), len);
      }
    }
  }
}

TEST(DeriveSeed, BaseForFirstAndDistinctOtherwise) {
  EXPECT_EQ(derive_seed(42, 0, 0), 42u);
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t s = 0; s < 5; ++s) seen.insert(derive_seed(42, i, s));
  EXPECT_EQ(seen.size(), 250u);
}

TEST(RunExtraction, GreedyMockLeaksPlantedEntities) {
  Rig rig;
  MockModelBackend target(rig.model, rig.greedy());
  auto prefixes = craft_prefixes(rig.corpus, rig.scanner, 6).prefixes;
  auto run = run_extraction(target, prefixes, rig.greedy(), rig.scanner);
  ASSERT_EQ(run.generations.size(), prefixes.size());
  EXPECT_EQ(run.manifest.failures, 0u);
  EXPECT_EQ(run.manifest.target_id, "mock-ngram-4");
  std::size_t memorized = 0;
  for (const auto& g : run.generations) {
    EXPECT_EQ(g.extracted, rig.scanner.scan(g.output));
    EXPECT_LE(text::split_whitespace(g.output).size(),
              static_cast<std::size_t>(g.decode_params.max_new_tokens));
    memorized += memorization_check(*rig.corpus.find(g.prefix.record_id), g);
  }
  EXPECT_EQ(memorized, run.generations.size());
  // every planted entity shows up normalized somewhere
  std::set<std::string> got;
  for (const auto& s : all_extracted(run)) got.insert(s.normalized);
  for (const auto& p : rig.corpus.manifest) EXPECT_TRUE(got.count(p.canonical)) << p.canonical;
}

TEST(RunExtraction, ParallelismDoesNotChangeResults) {
  Rig rig;
  DecodeParams p;
  p.rng_seed = 5;
  p.max_new_tokens = 24;
  MockModelBackend target(rig.model, p);
  auto prefixes = craft_prefixes(rig.corpus, rig.scanner, 6).prefixes;
  ExtractionOptions one{1, 3}, many{4, 3};
  auto a = run_extraction(target, prefixes, p, rig.scanner, one);
  auto b = run_extraction(target, prefixes, p, rig.scanner, many);
  ASSERT_EQ(a.generations.size(), prefixes.size() * 3);
  for (std::size_t i = 0; i < a.generations.size(); ++i) {
    EXPECT_EQ(a.generations[i].output, b.generations[i].output);
    EXPECT_EQ(a.generations[i].prefix.record_id, prefixes[i / 3].record_id);
    EXPECT_EQ(a.generations[i].sample, i % 3);
  }
}

TEST(RunExtraction, FaultIsolationAndTotalFailure) {
  ioc::Scanner scanner;
  std::vector<Prefix> prefixes = {{"a", {"alpha"}, "alpha"}, {"b", {"beta"}, "beta"},
                                  {"c", {"gamma"}, "gamma"}};
  ScriptedBackend flaky(ScriptedBackend::Script([](const CompletionRequest& r) -> std::string {
    if (r.prompt == "beta") throw BackendError("boom");
    return "reply via 10.0.0.9";
  }));
  auto run = run_extraction(flaky, prefixes, DecodeParams{}, scanner);
  EXPECT_EQ(run.manifest.failures, 1u);
  EXPECT_TRUE(run.generations[1].error.has_value());
  EXPECT_FALSE(run.generations[0].error.has_value());
  EXPECT_EQ(run.generations[2].extracted.size(), 1u);

  ScriptedBackend quiet("nothing sensitive in here");
  auto clean = run_extraction(quiet, prefixes, DecodeParams{}, scanner);
  for (const auto& g : clean.generations) EXPECT_TRUE(g.extracted.empty());

  ScriptedBackend down("x");
  down.set_failing(true);
  EXPECT_THROW(run_extraction(down, prefixes, DecodeParams{}, scanner), BackendError);
}

TEST(MemorizationCheck, Cases) {
  Record r{"r", "alpha beta gamma", "delta epsilon zeta eta", {}, 0};
  GenerationRecord g;
  g.prefix = {"r", {"alpha", "beta", "gamma"}, ""};
  g.decode_params.max_new_tokens = 10;
  g.output = "delta epsilon zeta eta";
  EXPECT_TRUE(memorization_check(r, g));
  g.output = "omega epsilon zeta eta";
  EXPECT_FALSE(memorization_check(r, g));
  g.decode_params.max_new_tokens = 2;
  g.output = "delta epsilon";
  EXPECT_TRUE(memorization_check(r, g));
  g.output = "delta";
  EXPECT_FALSE(memorization_check(r, g));
}

TEST(Replay, StoredParamsReproduceRun) {
  Rig rig;
  DecodeParams p;
  p.rng_seed = 99;
  p.max_new_tokens = 30;
  MockModelBackend target(rig.model, p);
  auto prefixes = craft_prefixes(rig.corpus, rig.scanner, 6).prefixes;
  auto first = run_extraction(target, prefixes, p, rig.scanner, {1, 2});
  auto again = run_extraction(target, prefixes, first.manifest.params, rig.scanner,
                              {1, first.manifest.samples});
  ASSERT_EQ(first.generations.size(), again.generations.size());
  for (std::size_t i = 0; i < first.generations.size(); ++i) {
    EXPECT_EQ(first.generations[i].output, again.generations[i].output);
    EXPECT_EQ(first.generations[i].extracted, again.generations[i].extracted);
  }
}

// Duplicating a record in training should not make its entity harder to pull
// out by sampling. Checked as a count over many seeds.
TEST(Property, DuplicationDoesNotReduceExtraction) {
  ioc::Scanner scanner;
  std::string target = "operators staged the loader on 45.76.89.10 for the intrusion";
  std::vector<std::string> base = {
      target, "operators staged the loader on a shared host for the intrusion",
      "operators staged the loader on a rented server for the intrusion",
      "operators staged the loader on compromised routers for the intrusion"};
  auto hits = [&](int copies) {
    std::vector<std::string> texts = base;
    for (int i = 1; i < copies; ++i) texts.push_back(target);
    auto m = NGramModel::train_texts(texts, 3);
    std::vector<std::string> prefix = {"operators", "staged", "the", "loader", "on"};
    int n = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      DecodeParams p;
      p.rng_seed = seed;
      p.temperature = 1.0;
      p.max_new_tokens = 8;
      auto out = text::join(m.decode(prefix, p), " ");
      n += !scanner.scan(out).empty();
    }
    return n;
  };
  int h1 = hits(1), h2 = hits(2), h4 = hits(4);
  EXPECT_LE(h1, h2);
  EXPECT_LE(h2, h4);
  EXPECT_GT(h4, h1);
}
