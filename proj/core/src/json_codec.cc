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


#include "ctiguard/json_codec.h"

#include <cmath>
#include <string>

#include "ctiguard/errors.h"

namespace ctiguard::codec {
namespace {

EntityKind kind_from(const Json& j) {
  auto k = entity_kind_from_string(j.get<std::string>());
  if (!k) throw ParseError("unknown entity kind " + j.dump());
  return *k;
}

}  // namespace

Json parse(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json to_json(const EntitySpan& s) {
  return {{"kind", to_string(s.kind)},
          {"start", s.start},
          {"end", s.end},
          {"raw", s.raw},
          {"normalized", s.normalized}};
}

EntitySpan entity_span_from_json(const Json& j) {
  EntitySpan s;
  s.kind = kind_from(j.at("kind"));
  s.start = j.at("start").get<std::size_t>();
  s.end = j.at("end").get<std::size_t>();
  s.raw = j.at("raw").get<std::string>();
  s.normalized = j.at("normalized").get<std::string>();
  return s;
}

Json to_json(const DecodeParams& p) {
  return {{"top_k", p.top_k},
          {"temperature", p.temperature},
          {"repetition_penalty", p.repetition_penalty},
          {"no_repeat_ngram", p.no_repeat_ngram},
          {"max_new_tokens", p.max_new_tokens},
          {"rng_seed", p.rng_seed},
          {"greedy", p.greedy}};
}

DecodeParams decode_params_from_json(const Json& j) {
  DecodeParams p;
  p.top_k = j.value("top_k", p.top_k);
  p.temperature = j.value("temperature", p.temperature);
  p.repetition_penalty = j.value("repetition_penalty", p.repetition_penalty);
  p.no_repeat_ngram = j.value("no_repeat_ngram", p.no_repeat_ngram);
  p.max_new_tokens = j.value("max_new_tokens", p.max_new_tokens);
  p.rng_seed = j.value("rng_seed", p.rng_seed);
  p.greedy = j.value("greedy", p.greedy);
  return p;
}

Json to_json(const Prefix& p) {
  return {{"record_id", p.record_id}, {"tokens", p.tokens}, {"source_sanitized", p.source_sanitized}};
}

Json to_json(const GenerationRecord& g) {
  Json j = {{"prefix", to_json(g.prefix)},
            {"sample", g.sample},
            {"output", g.output},
            {"decode_params", to_json(g.decode_params)},
            {"extracted", Json::array()},
            {"latency_ms", g.latency_ms}};
  for (const auto& e : g.extracted) j["extracted"].push_back(to_json(e));
  j["error"] = g.error ? Json(*g.error) : Json(nullptr);
  return j;
}

Json to_json(const ExtractionRun& run) {
  Json j;
  j["manifest"] = {{"target_id", run.manifest.target_id},
                   {"params", to_json(run.manifest.params)},
                   {"samples", run.manifest.samples},
                   {"prefix_count", run.manifest.prefix_count},
                   {"failures", run.manifest.failures}};
  j["generations"] = Json::array();
  for (const auto& g : run.generations) j["generations"].push_back(to_json(g));
  return j;
}

ExtractionRun extraction_run_from_json(const Json& j) {
  ExtractionRun run;
  try {
    const auto& m = j.at("manifest");
    run.manifest.target_id = m.at("target_id").get<std::string>();
    run.manifest.params = decode_params_from_json(m.at("params"));
    run.manifest.samples = m.at("samples").get<std::size_t>();
    run.manifest.prefix_count = m.at("prefix_count").get<std::size_t>();
    run.manifest.failures = m.value("failures", std::size_t{0});
    for (const auto& g : j.at("generations")) {
      GenerationRecord r;
      const auto& p = g.at("prefix");
      r.prefix.record_id = p.at("record_id").get<std::string>();
      r.prefix.tokens = p.at("tokens").get<std::vector<std::string>>();
      r.prefix.source_sanitized = p.value("source_sanitized", std::string());
      r.sample = g.value("sample", std::size_t{0});
      r.output = g.at("output").get<std::string>();
      r.decode_params = decode_params_from_json(g.at("decode_params"));
      for (const auto& e : g.at("extracted")) r.extracted.push_back(entity_span_from_json(e));
      r.latency_ms = g.value("latency_ms", 0.0);
      if (g.contains("error") && !g["error"].is_null()) r.error = g["error"].get<std::string>();
      run.generations.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("extraction run: ") + e.what());
  }
  return run;
}

Json to_json(const Verdict& v) {
  return {{"label", to_string(v.label)},
          {"confidence", v.confidence},
          {"rationale", v.rationale},
          {"engine", to_string(v.engine)},
          {"score", v.score()}};
}

Json to_json(const RedactionResult& r) {
  Json j = {{"text", r.text}, {"engine", to_string(r.engine)}, {"removed", Json::array()}};
  for (const auto& s : r.removed) j["removed"].push_back(to_json(s));
  j["residual_pass"] = r.residual_pass;
  return j;
}

Json to_json(const StageTimings& t) {
  return {{"classifier_ms", t.classifier_ms},
          {"upstream_ms", t.upstream_ms},
          {"redactor_ms", t.redactor_ms},
          {"total_ms", t.total_ms}};
}

StageTimings stage_timings_from_json(const Json& j) {
  StageTimings t;
  t.classifier_ms = j.value("classifier_ms", 0.0);
  t.upstream_ms = j.value("upstream_ms", 0.0);
  t.redactor_ms = j.value("redactor_ms", 0.0);
  t.total_ms = j.value("total_ms", 0.0);
  return t;
}

Json to_json(const metrics::LeakageReport& r) {
  Json j;
  j["extracted_total"] = r.extracted_total;
  j["categories"] = Json::object();
  for (const auto& [kind, c] : r.categories) {
    j["categories"][std::string(to_string(kind))] = {
        {"inventory_count", c.inventory_count},
        {"matched_count", c.matched_count},
        {"raw_exact_count", c.raw_exact_count},
        {"rate", c.rate ? Json(*c.rate) : Json(nullptr)},
        {"matched", c.matched}};
  }
  return j;
}

metrics::LeakageReport leakage_report_from_json(const Json& j) {
  metrics::LeakageReport r;
  try {
    r.extracted_total = j.value("extracted_total", std::size_t{0});
    for (const auto& [name, c] : j.at("categories").items()) {
      auto kind = entity_kind_from_string(name);
      if (!kind) throw ParseError("leakage report: unknown category " + name);
      metrics::CategoryLeakage cl;
      cl.inventory_count = c.at("inventory_count").get<std::size_t>();
      cl.matched_count = c.at("matched_count").get<std::size_t>();
      cl.raw_exact_count = c.value("raw_exact_count", std::size_t{0});
      if (!c.at("rate").is_null()) cl.rate = c.at("rate").get<double>();
      cl.matched = c.value("matched", std::set<std::string>{});
      r.categories[*kind] = std::move(cl);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("leakage report: ") + e.what());
  }
  return r;
}

Json to_json(const metrics::ClassifierEval& e) {
  return {{"tp", e.tp},           {"fp", e.fp},       {"tn", e.tn},
          {"fn", e.fn},           {"accuracy", e.accuracy}, {"precision", e.precision},
          {"recall", e.recall},   {"f1", e.f1},       {"fpr", e.fpr},
          {"fnr", e.fnr}};
}

Json to_json(const metrics::RocCurve& roc) {
  Json pts = Json::array();
  for (const auto& p : roc.points) {
    pts.push_back({{"fpr", p.fpr},
                   {"tpr", p.tpr},
                   {"threshold", std::isinf(p.threshold) ? Json(nullptr) : Json(p.threshold)}});
  }
  return {{"auc", roc.auc}, {"points", pts}};
}

Json to_json(const metrics::Summary& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"p95", s.p95}, {"min", s.min}, {"max", s.max}};
}

Json to_json(const metrics::LatencyStats& l) {
  return {{"count", l.count},
          {"classifier", to_json(l.classifier)},
          {"upstream", to_json(l.upstream)},
          {"redactor", to_json(l.redactor)},
          {"total", to_json(l.total)}};
}

Json to_json(const cti::MappingOutcome& o) {
  Json flags = Json::object();
  for (std::size_t i = 0; i < cti::kMappingMetricCount; ++i) {
    flags[std::string(cti::to_string(static_cast<cti::MappingMetric>(i)))] = o.flags[i];
  }
  return {{"flags", flags}, {"annotations", o.annotations}, {"not_in_table", o.not_in_table}};
}

}  // namespace ctiguard::codec
