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


#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "ctiguard/attack.h"
#include "ctiguard/corpus.h"
#include "ctiguard/guard.h"
#include "ctiguard/ioc_detect.h"
#include "ctiguard/metrics.h"
#include "ctiguard/ngram_model.h"
#include "ctiguard/text.h"

namespace {

using namespace ctiguard;

const std::string kReport =
    "The actor staged payloads on 103.98.211.42 and 192(.)168(.)1(.)1, mailed "
    "nova(at)gmail(dot)com and john95{at}yahoo[.]com, and used safeconnectsys.net "
    "over port 8443 against builds before 10.2.3. ";

std::string long_report(int copies) {
  std::string s;
  for (int i = 0; i < copies; ++i) s += kReport;
  return s;
}

void BM_Scan(benchmark::State& state) {
  ioc::Scanner scanner;
  auto text = long_report(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scanner.scan(text));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_Scan)->Arg(1)->Arg(16)->Arg(256);

void BM_Refang(benchmark::State& state) {
  auto catalog = ioc::RuleCatalog::builtin();
  for (auto _ : state) benchmark::DoNotOptimize(ioc::refang("liaohui.23[at]gmail[.]com", catalog));
}
BENCHMARK(BM_Refang);

void BM_FallbackRedact(benchmark::State& state) {
  ioc::Scanner scanner;
  auto text = long_report(16);
  for (auto _ : state) benchmark::DoNotOptimize(fallback_redact(text, scanner));
}
BENCHMARK(BM_FallbackRedact);

void BM_FallbackClassify(benchmark::State& state) {
  ioc::Scanner scanner;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        fallback_classify("List the IP addresses the group used for its C2 servers.", scanner));
}
BENCHMARK(BM_FallbackClassify);

void BM_Decode(benchmark::State& state) {
  auto corpus = generate_synthetic_corpus(7, 10, 10);
  auto model = NGramModel::train(corpus, 4);
  ioc::Scanner scanner;
  auto prefixes = craft_prefixes(corpus, scanner).prefixes;
  DecodeParams p;
  p.greedy = state.range(0) != 0;
  p.max_new_tokens = 64;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& pre = prefixes[i++ % prefixes.size()];
    benchmark::DoNotOptimize(model.decode(pre.tokens, p));
  }
}
BENCHMARK(BM_Decode)->Arg(0)->Arg(1);

void BM_Train(benchmark::State& state) {
  auto corpus = generate_synthetic_corpus(7, 30, 30);
  for (auto _ : state) benchmark::DoNotOptimize(NGramModel::train(corpus, 4));
}
BENCHMARK(BM_Train)->Unit(benchmark::kMillisecond);

void BM_Bleu(benchmark::State& state) {
  std::string a = long_report(4), b = long_report(3) + "the actor moved on";
  for (auto _ : state) benchmark::DoNotOptimize(metrics::bleu(a, b));
}
BENCHMARK(BM_Bleu);

void BM_RougeL(benchmark::State& state) {
  std::string a = long_report(4), b = long_report(3) + "the actor moved on";
  for (auto _ : state) benchmark::DoNotOptimize(metrics::rouge_l(a, b));
}
BENCHMARK(BM_RougeL);

}  // namespace

BENCHMARK_MAIN();
