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


// ingest, synth, inventory, detect, attack, leakage

#include <fstream>
#include <sstream>

#include "commands.h"
#include "ctiguard/attack.h"
#include "ctiguard/corpus.h"
#include "ctiguard/errors.h"
#include "ctiguard/ioc_detect.h"
#include "ctiguard/json_codec.h"
#include "ctiguard/metrics.h"
#include "ctiguard/ngram_model.h"

namespace ctiguard::cli {
namespace {

Json spans_json(const std::vector<EntitySpan>& spans) {
  Json a = Json::array();
  for (const auto& s : spans) a.push_back(codec::to_json(s));
  return a;
}

void add_ingest(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string in, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("ingest", "Validate a JSONL corpus and optionally rewrite it");
  sub->add_option("--in", o->in, "Corpus file (JSON lines with id, prompt, response)")->required();
  sub->add_option("--out", o->out, "Write the validated corpus here");
  ctx.actions[sub] = [&ctx, o] {
    auto corpus = load_corpus(o->in);
    if (!o->out.empty()) save_corpus(corpus, o->out);
    emit_json(ctx, "", Json{{"source", corpus.source}, {"records", corpus.records.size()}});
  };
}

void add_synth(CLI::App& app, Context& ctx) {
  auto o = std::make_shared<SyntheticOptions>();
  auto out = std::make_shared<std::string>();
  auto manifest = std::make_shared<std::string>();
  o->records_per_category = 30;
  o->entities_per_category = 30;
  auto* sub = app.add_subcommand("synth", "Generate a seeded synthetic CTI corpus");
  sub->add_option("--seed", o->seed, "RNG seed")->capture_default_str();
  sub->add_option("--records", o->records_per_category, "Records per entity category")
      ->capture_default_str();
  sub->add_option("--entities", o->entities_per_category, "Distinct entities per category")
      ->capture_default_str();
  sub->add_option("--obfuscation", o->obfuscation_fraction, "Share of defanged IP/email/domain")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--out", *out, "Corpus output path")->required();
  sub->add_option("--manifest", *manifest, "Planted-entity manifest output path");
  ctx.actions[sub] = [&ctx, o, out, manifest] {
    auto corpus = generate_synthetic_corpus(*o);
    save_corpus(corpus, *out);
    if (!manifest->empty()) emit(ctx, *manifest, manifest_to_json(corpus));
    emit_json(ctx, "",
              Json{{"source", *out}, {"records", corpus.records.size()}, {"seed", o->seed}});
  };
}

void add_inventory(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string corpus, manifest, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("inventory", "Collect the sensitive entities of a corpus");
  sub->add_option("--corpus", o->corpus, "Corpus file");
  sub->add_option("--manifest", o->manifest, "Use a synth manifest instead of scanning");
  sub->add_option("--out", o->out, "Output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    SensitiveInventory inv;
    if (!o->manifest.empty()) {
      inv = inventory_from_manifest(manifest_from_json(read_file(o->manifest)));
    } else if (!o->corpus.empty()) {
      inv = build_inventory(load_corpus(o->corpus), ioc::Scanner());
    } else {
      throw ValidationError("inventory: give --corpus or --manifest");
    }
    emit(ctx, o->out, inventory_to_json(inv));
  };
}

void add_detect(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string text, in, rules;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("detect", "Find and normalize entities, including defanged ones");
  auto* t = sub->add_option("--text", o->text, "Text to scan");
  auto* f = sub->add_option("--in", o->in,
                            "File with one text per line (or JSON with \"text\"); '-' for stdin");
  t->excludes(f);
  sub->add_option("--rules", o->rules, "Extra defang rules (JSON)");
  ctx.actions[sub] = [&ctx, o, t] {
    ioc::Scanner scanner(o->rules.empty() ? ioc::RuleCatalog::builtin()
                                          : ioc::RuleCatalog::from_file(o->rules));
    if (!o->in.empty()) {
      std::ostringstream lines;
      for (const auto& item : read_items(o->in, "text")) {
        lines << Json{{"text", item}, {"entities", spans_json(scanner.scan(item))}}.dump() << "\n";
      }
      emit(ctx, "", lines.str());
      return;
    }
    if (!t->count()) o->text = read_file("-");  // no flags: scan standard input as one text
    emit_json(ctx, "", Json{{"text", o->text}, {"entities", spans_json(scanner.scan(o->text))}});
  };
}

void add_attack(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string corpus, model, save_model, out, config;
    int order = 4;
    std::size_t prefix_len = kDefaultPrefixLength;
    DecodeParams params;
    ExtractionOptions run;
    bool defend = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("attack", "Prefix-based extraction against a memorizing model");
  sub->add_option("--corpus", o->corpus, "Training corpus; prefixes come from its records")
      ->required();
  sub->add_option("--model", o->model, "Load a saved model instead of training");
  sub->add_option("--order", o->order, "n-gram order when training")->capture_default_str();
  sub->add_option("--save-model", o->save_model, "Save the trained model here");
  sub->add_option("--prefix-len", o->prefix_len, "Prefix length in tokens")->capture_default_str();
  sub->add_flag("--greedy", o->params.greedy, "Greedy decoding");
  sub->add_option("--top-k", o->params.top_k)->capture_default_str();
  sub->add_option("--temperature", o->params.temperature)->capture_default_str();
  sub->add_option("--repetition-penalty", o->params.repetition_penalty)->capture_default_str();
  sub->add_option("--no-repeat-ngram", o->params.no_repeat_ngram)->capture_default_str();
  sub->add_option("--max-new-tokens", o->params.max_new_tokens)->capture_default_str();
  sub->add_option("--seed", o->params.rng_seed, "Base sampling seed")->capture_default_str();
  sub->add_option("--samples", o->run.samples, "Generations per prefix")->capture_default_str();
  sub->add_option("--parallelism", o->run.parallelism)->capture_default_str();
  sub->add_flag("--defend", o->defend, "Route every query through the guard");
  sub->add_option("--config", o->config, "Guard configuration (TOML) for --defend");
  sub->add_option("--out", o->out, "Run output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    o->params.validate();
    auto corpus = load_corpus(o->corpus);
    std::shared_ptr<NGramModel> model;
    if (!o->model.empty()) {
      model = std::make_shared<NGramModel>(NGramModel::from_json(read_file(o->model)));
    } else {
      model = std::make_shared<NGramModel>(NGramModel::train(corpus, o->order));
    }
    if (!o->save_model.empty()) emit(ctx, o->save_model, model->to_json());

    ioc::Scanner scanner;
    auto prefixes = craft_prefixes(corpus, scanner, o->prefix_len);
    std::shared_ptr<CompletionBackend> target =
        std::make_shared<MockModelBackend>(model, o->params);
    if (o->defend) {
      auto setup = guard_setup(o->config);
      target = std::make_shared<GuardedBackend>(setup.guard, target, setup.provider);
    }
    auto run = run_extraction(*target, prefixes.prefixes, o->params, scanner, o->run);
    Json j = codec::to_json(run);
    j["skipped_records"] = prefixes.skipped;
    emit_json(ctx, o->out, j);
  };
}

void add_leakage(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string run, inventory, corpus, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("leakage", "Score an attack run against the sensitive inventory");
  sub->add_option("--run", o->run, "Attack run JSON")->required();
  auto* inv = sub->add_option("--inventory", o->inventory, "Inventory JSON");
  auto* cor = sub->add_option("--corpus", o->corpus, "Build the inventory from this corpus");
  inv->excludes(cor);
  sub->add_option("--out", o->out, "Report output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    auto run = codec::extraction_run_from_json(codec::parse(read_file(o->run), o->run));
    SensitiveInventory inventory;
    if (!o->inventory.empty()) {
      inventory = inventory_from_json(read_file(o->inventory));
    } else if (!o->corpus.empty()) {
      inventory = build_inventory(load_corpus(o->corpus), ioc::Scanner());
    } else {
      throw ValidationError("leakage: give --inventory or --corpus");
    }
    auto spans = all_extracted(run);
    Json j = codec::to_json(metrics::leakage(spans, inventory));
    j["target_id"] = run.manifest.target_id;
    emit_json(ctx, o->out, j);
  };
}

}  // namespace

void add_data_commands(CLI::App& app, Context& ctx) {
  add_ingest(app, ctx);
  add_synth(app, ctx);
  add_inventory(app, ctx);
  add_detect(app, ctx);
  add_attack(app, ctx);
  add_leakage(app, ctx);
}

}  // namespace ctiguard::cli
