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


// classify, redact, baseline-mask, evaluate-classifier, evaluate-redactor,
// cti-eval, bench-latency, serve

#include <array>
#include <map>
#include <sstream>

#include "commands.h"
#include "ctiguard/attack.h"
#include "ctiguard/baseline.h"
#include "ctiguard/corpus.h"
#include "ctiguard/cti_utility.h"
#include "ctiguard/errors.h"
#include "ctiguard/json_codec.h"
#include "ctiguard/metrics.h"
#include "ctiguard/net/gateway.h"
#include "ctiguard/text.h"

namespace ctiguard::cli {
namespace {

struct TextInput {
  std::string text, in;
};

void add_text_input(CLI::App* sub, TextInput& t, const char* flag, const char* field_help) {
  auto* a = sub->add_option(std::string("--") + flag, t.text, "Input text");
  auto* b = sub->add_option("--in", t.in, field_help);
  a->excludes(b);
}

std::vector<std::string> gather(const TextInput& t, const char* flag, const char* field) {
  if (!t.in.empty()) return read_items(t.in, field);
  if (t.text.empty()) throw ValidationError(std::string("give --") + flag + " or --in");
  return {t.text};
}

void emit_items(Context& ctx, const TextInput& t, const std::vector<Json>& items) {
  if (t.in.empty()) {
    emit_json(ctx, "", items.front());
    return;
  }
  std::ostringstream s;
  for (const auto& j : items) s << j.dump() << "\n";
  emit(ctx, "", s.str());
}

void add_classify(CLI::App& app, Context& ctx) {
  struct Opts {
    TextInput input;
    std::string config;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("classify", "Label prompts harmful or harmless");
  add_text_input(sub, o->input, "prompt", "File with one prompt per line (or JSON with \"prompt\")");
  sub->add_option("--config", o->config, "Guard configuration (TOML)");
  ctx.actions[sub] = [&ctx, o] {
    auto setup = guard_setup(o->config);
    std::vector<Json> out;
    for (const auto& p : gather(o->input, "prompt", "prompt")) {
      Json j = codec::to_json(setup.guard->classify(p, setup.provider.get()));
      j["prompt"] = p;
      out.push_back(std::move(j));
    }
    emit_items(ctx, o->input, out);
  };
}

void add_redact(CLI::App& app, Context& ctx) {
  struct Opts {
    TextInput input;
    std::string config;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("redact", "Remove sensitive entities and rewrite the text");
  add_text_input(sub, o->input, "text", "File with one text per line (or JSON with \"text\")");
  sub->add_option("--config", o->config, "Guard configuration (TOML)");
  ctx.actions[sub] = [&ctx, o] {
    auto setup = guard_setup(o->config);
    std::vector<Json> out;
    for (const auto& t : gather(o->input, "text", "text")) {
      auto r = setup.guard->redact(t, setup.provider.get());
      out.push_back(Json{{"text", r.text}, {"engine", to_string(r.engine)}});
    }
    emit_items(ctx, o->input, out);
  };
}

baseline::MaskPolicy policy_for(const std::string& mode, const std::string& config) {
  baseline::MaskPolicy p;
  if (auto path = config_path(config)) p = net::load_config(*path).baseline;
  if (!mode.empty()) {
    auto m = baseline::mask_mode_from_string(mode);
    if (!m) throw ValidationError("unknown mask mode '" + mode + "'");
    p.mode = *m;
  }
  return p;
}

void add_baseline_mask(CLI::App& app, Context& ctx) {
  struct Opts {
    TextInput input;
    std::string mode, config;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("baseline-mask", "Mask entities with typed placeholders");
  add_text_input(sub, o->input, "text", "File with one text per line (or JSON with \"text\")");
  sub->add_option("--mode", o->mode, "canonical or extended")
      ->check(CLI::IsMember({"canonical", "extended"}));
  sub->add_option("--config", o->config, "Configuration with a [baseline] table");
  ctx.actions[sub] = [&ctx, o] {
    auto policy = policy_for(o->mode, o->config);
    std::vector<Json> out;
    for (const auto& t : gather(o->input, "text", "text")) {
      out.push_back(Json{{"text", baseline::mask(t, policy)}, {"mode", to_string(policy.mode)}});
    }
    emit_items(ctx, o->input, out);
  };
}

void add_evaluate_classifier(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string in, config, out;
    bool builtin = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("evaluate-classifier", "Confusion metrics and ROC for the classifier");
  auto* in = sub->add_option("--in", o->in, "JSONL with prompt and label (harmful|harmless)");
  auto* b = sub->add_flag("--builtin", o->builtin, "Evaluate on the built-in demonstrations");
  in->excludes(b);
  sub->add_option("--config", o->config, "Guard configuration (TOML)");
  sub->add_option("--out", o->out, "Output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    std::vector<std::pair<std::string, Label>> data;
    if (o->builtin) {
      for (const auto& s : FewShotSet::builtin().classifier) {
        data.emplace_back(s.prompt, expected_label(s.category));
      }
    } else if (!o->in.empty()) {
      std::istringstream lines(read_file(o->in));
      std::string line;
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = codec::parse(line, o->in);
        auto label = label_from_string(j.value("label", std::string()));
        if (!label || !j.contains("prompt")) {
          throw ValidationError(o->in + ": each line needs prompt and label harmful|harmless");
        }
        data.emplace_back(j["prompt"].get<std::string>(), *label);
      }
    } else {
      throw ValidationError("evaluate-classifier: give --in or --builtin");
    }
    if (data.empty()) throw ValidationError("evaluate-classifier: no samples");

    auto setup = guard_setup(o->config);
    std::vector<Verdict> verdicts;
    std::vector<Label> labels;
    std::vector<std::pair<double, Label>> scored;
    Json items = Json::array();
    for (const auto& [prompt, label] : data) {
      auto v = setup.guard->classify(prompt, setup.provider.get());
      verdicts.push_back(v);
      labels.push_back(label);
      scored.emplace_back(v.score(), label);
      Json item = codec::to_json(v);
      item["prompt"] = prompt;
      item["expected"] = to_string(label);
      items.push_back(std::move(item));
    }
    Json j;
    j["n"] = data.size();
    j["eval"] = codec::to_json(metrics::classifier_eval(verdicts, labels));
    try {
      j["roc"] = codec::to_json(metrics::roc_auc(scored));
    } catch (const ValidationError&) {
      j["roc"] = nullptr;  // single-class input
    }
    j["items"] = items;
    emit_json(ctx, o->out, j);
  };
}

void add_evaluate_redactor(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string in, config, out, mode = "extended";
    bool builtin = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("evaluate-redactor",
                                 "Utility of guard redaction against placeholder masking");
  auto* in = sub->add_option("--in", o->in, "JSONL with text and optional reference");
  auto* b = sub->add_flag("--builtin", o->builtin, "Use the built-in redactor demonstrations");
  in->excludes(b);
  sub->add_option("--mode", o->mode, "Baseline mask mode")
      ->check(CLI::IsMember({"canonical", "extended"}))
      ->capture_default_str();
  sub->add_option("--config", o->config, "Guard configuration (TOML)");
  sub->add_option("--out", o->out, "Output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    std::vector<std::pair<std::string, std::string>> data;  // text, comparison target
    if (o->builtin) {
      for (const auto& p : FewShotSet::builtin().redactor) data.emplace_back(p.input, p.output);
    } else if (!o->in.empty()) {
      std::istringstream lines(read_file(o->in));
      std::string line;
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = codec::parse(line, o->in);
        if (!j.contains("text")) throw ValidationError(o->in + ": each line needs text");
        auto text = j["text"].get<std::string>();
        data.emplace_back(text, j.value("reference", text));
      }
    } else {
      throw ValidationError("evaluate-redactor: give --in or --builtin");
    }
    if (data.empty()) throw ValidationError("evaluate-redactor: no samples");

    auto setup = guard_setup(o->config);
    auto policy = policy_for(o->mode, "");
    metrics::TfHashEmbedder embedder;
    const auto& scanner = setup.guard->scanner();
    struct Acc {
      double cosine = 0, bleu = 0, rouge = 0;
      std::size_t residual = 0;
    } g, bl;
    auto score = [&](Acc& acc, const std::string& out, const std::string& target) {
      acc.cosine += metrics::cosine(out, target, embedder);
      if (!text::split_whitespace(out).empty()) {
        acc.bleu += metrics::bleu(out, target);
        acc.rouge += metrics::rouge_l(out, target);
      }
      acc.residual += scanner.scan(out).size();
    };
    for (const auto& [text, target] : data) {
      score(g, setup.guard->redact(text, setup.provider.get()).text, target);
      score(bl, baseline::mask(text, policy), target);
    }
    double n = static_cast<double>(data.size());
    auto summary = [n](const Acc& a) {
      return Json{{"cosine", 100.0 * a.cosine / n},
                  {"bleu", 100.0 * a.bleu / n},
                  {"rouge_l", 100.0 * a.rouge / n},
                  {"residual_entities", a.residual}};
    };
    emit_json(ctx, o->out,
              Json{{"n", data.size()},
                   {"embedder", embedder.id()},
                   {"guard", summary(g)},
                   {"baseline", summary(bl)},
                   {"baseline_mode", to_string(policy.mode)}});
  };
}

void add_cti_eval(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string in, cve_table, technique_table, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("cti-eval", "CVE/CWE mapping and technique group-overlap utility");
  sub->add_option("--in", o->in, "JSONL with generated and expected")->required();
  sub->add_option("--cve-table", o->cve_table, "CVE mapping table (JSON)");
  sub->add_option("--technique-table", o->technique_table, "Technique to group table (JSON)");
  sub->add_option("--out", o->out, "Output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    std::optional<cti::CveMappingTable> cves;
    std::optional<cti::TechniqueGroupTable> techniques;
    if (!o->cve_table.empty()) cves = cti::CveMappingTable::load(o->cve_table);
    if (!o->technique_table.empty()) techniques = cti::TechniqueGroupTable::load(o->technique_table);

    std::array<std::size_t, cti::kMappingMetricCount> hits{};
    std::size_t n = 0, mapped = 0, tech_pairs = 0, tech_exact = 0, tech_group = 0;
    Json items = Json::array();
    std::istringstream lines(read_file(o->in));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto j = codec::parse(line, o->in);
      if (!j.contains("generated") || !j.contains("expected")) {
        throw ValidationError(o->in + ": each line needs generated and expected");
      }
      auto gen = j["generated"].get<std::string>();
      auto exp = j["expected"].get<std::string>();
      ++n;
      Json item{{"generated", gen}, {"expected", exp}};
      auto gi = cti::extract_ids(gen);
      auto xi = cti::extract_ids(exp);
      item["ids"] = {{"generated", {{"cves", gi.cves}, {"cwes", gi.cwes}, {"techniques", gi.techniques}}},
                     {"expected", {{"cves", xi.cves}, {"cwes", xi.cwes}, {"techniques", xi.techniques}}}};
      if (cves) {
        auto m = cti::evaluate_mapping(gen, exp, *cves);
        for (std::size_t k = 0; k < hits.size(); ++k) hits[k] += m.flags[k] ? 1 : 0;
        ++mapped;
        item["mapping"] = codec::to_json(m);
      }
      if (!gi.techniques.empty() && !xi.techniques.empty()) {
        ++tech_pairs;
        bool exact = gi.techniques.front() == xi.techniques.front();
        tech_exact += exact ? 1 : 0;
        Json t{{"exact", exact}};
        if (techniques) {
          auto gm = cti::group_overlap_match(gi.techniques.front(), xi.techniques.front(), *techniques);
          tech_group += gm.match ? 1 : 0;
          t["group_overlap"] = gm.match;
          if (gm.annotation) t["annotation"] = *gm.annotation;
        }
        item["technique"] = t;
      }
      items.push_back(std::move(item));
    }
    if (n == 0) throw ValidationError("cti-eval: no pairs");
    auto rate = [](std::size_t k, std::size_t d) { return d ? 100.0 * k / d : 0.0; };
    Json summary{{"pairs", n}};
    if (cves) {
      Json s = Json::object();
      for (std::size_t k = 0; k < hits.size(); ++k) {
        s[std::string(cti::to_string(static_cast<cti::MappingMetric>(k)))] = rate(hits[k], mapped);
      }
      summary["mapping_rates"] = s;
    }
    summary["technique_pairs"] = tech_pairs;
    summary["technique_exact_rate"] = rate(tech_exact, tech_pairs);
    if (techniques) summary["technique_group_rate"] = rate(tech_group, tech_pairs);
    emit_json(ctx, o->out, Json{{"summary", summary}, {"items", items}});
  };
}

void add_bench_latency(CLI::App& app, Context& ctx) {
  struct Opts {
    std::size_t requests = 50;
    std::uint64_t seed = 7;
    std::string config, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bench-latency", "Per-stage latency of the guarded pipeline");
  sub->add_option("--requests", o->requests, "Number of requests")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", o->seed, "Synthetic corpus seed when no config is given")
      ->capture_default_str();
  sub->add_option("--config", o->config, "Gateway configuration (TOML)");
  sub->add_option("--out", o->out, "Output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    auto setup = guard_setup(o->config);
    std::shared_ptr<CompletionBackend> upstream;
    auto corpus = generate_synthetic_corpus(o->seed, 10, 10);
    if (setup.config) {
      upstream = net::make_backend(setup.config->upstream, setup.config->timeout_ms);
    } else {
      DecodeParams p;
      p.greedy = true;
      upstream = std::make_shared<MockModelBackend>(
          std::make_shared<NGramModel>(NGramModel::train(corpus, 4)), p);
    }
    auto prefixes = craft_prefixes(corpus, setup.guard->scanner()).prefixes;
    if (prefixes.empty()) throw ValidationError("bench-latency: no prompts");
    std::vector<StageTimings> timings;
    std::map<std::string, std::size_t> statuses;
    for (std::size_t i = 0; i < o->requests; ++i) {
      auto r = setup.guard->guarded_complete(prefixes[i % prefixes.size()].text(), *upstream,
                                             setup.provider.get());
      timings.push_back(r.timings);
      ++statuses[std::string(to_string(r.status))];
    }
    Json j = codec::to_json(metrics::latency_stats(timings));
    j["statuses"] = statuses;
    j["upstream_id"] = upstream->id();
    emit_json(ctx, o->out, j);
  };
}

void add_serve(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string config, listen;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("serve", "Run the HTTP guard gateway");
  sub->add_option("--config", o->config, "Gateway configuration (TOML); else $CTIGUARD_CONFIG");
  sub->add_option("--listen", o->listen, "host:port, overrides the config");
  ctx.actions[sub] = [&ctx, o] {
    auto path = config_path(o->config);
    if (!path) throw ValidationError("serve: no configuration (use --config or CTIGUARD_CONFIG)");
    auto config = net::load_config(*path);
    if (!o->listen.empty()) std::tie(config.host, config.port) = net::parse_listen(o->listen);
    auto gateway = net::Gateway::from_config(config);
    int port = gateway->bind();
    ctx.err << "listening on " << config.host << ":" << port << std::endl;
    gateway->listen();
  };
}

}  // namespace

void add_guard_commands(CLI::App& app, Context& ctx) {
  add_classify(app, ctx);
  add_redact(app, ctx);
  add_baseline_mask(app, ctx);
  add_evaluate_classifier(app, ctx);
  add_evaluate_redactor(app, ctx);
  add_cti_eval(app, ctx);
  add_bench_latency(app, ctx);
  add_serve(app, ctx);
}

}  // namespace ctiguard::cli
