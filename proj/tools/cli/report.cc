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


// report: renders JSON artifacts as tables.

#include <filesystem>
#include <iomanip>
#include <sstream>

#include "commands.h"
#include "ctiguard/entity.h"
#include "ctiguard/errors.h"
#include "ctiguard/json_codec.h"

namespace ctiguard::cli {
namespace {

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string num(const Json& v, int precision = 2) {
  if (v.is_null()) return "NA";
  if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v.get<double>();
  return s.str();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream out;
  if (format == "csv") {
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << csv_cell(t.header[i]);
    out << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
      out << "\n";
    }
    return out.str();
  }
  if (format == "markdown") {
    out << "### " << t.title << "\n\n|";
    for (const auto& h : t.header) out << " " << h << " |";
    out << "\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) out << " --- |";
    out << "\n";
    for (const auto& r : t.rows) {
      out << "|";
      for (const auto& c : r) out << " " << c << " |";
      out << "\n";
    }
    return out.str();
  }
  std::vector<std::size_t> w(t.header.size(), 0);
  for (std::size_t i = 0; i < t.header.size(); ++i) w[i] = t.header[i].size();
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(w[i])) << cells[i];
    }
    out << "\n";
  };
  out << t.title << "\n";
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out.str();
}

enum class Kind { kLeakage, kClassifier, kUtility, kLatency, kRun, kCti };

Kind detect_kind(const Json& j, const std::string& path) {
  if (j.contains("categories")) return Kind::kLeakage;
  if (j.contains("eval")) return Kind::kClassifier;
  if (j.contains("guard") && j.contains("baseline")) return Kind::kUtility;
  if (j.contains("count") && j.contains("total") && j.contains("classifier")) return Kind::kLatency;
  if (j.contains("manifest") && j.contains("generations")) return Kind::kRun;
  if (j.contains("summary") && j.contains("items")) return Kind::kCti;
  throw ValidationError("report: " + path + " is not a recognized artifact");
}

std::string label_for(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

void add_report_command(CLI::App& app, Context& ctx) {
  struct Opts {
    std::vector<std::string> in;
    std::string format = "text";
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("report", "Render JSON artifacts as tables");
  sub->add_option("--in", o->in, "Artifact JSON (repeatable; leakage reports become rows)")
      ->required();
  sub->add_option("--format", o->format, "text, csv or markdown")
      ->check(CLI::IsMember({"text", "csv", "markdown"}))
      ->capture_default_str();
  sub->add_option("--out", o->out, "Output path (default stdout)");
  ctx.actions[sub] = [&ctx, o] {
    std::map<Kind, Table> tables;
    std::vector<Kind> order;
    auto table = [&](Kind k, const std::string& title, std::vector<std::string> header) -> Table& {
      if (!tables.count(k)) {
        tables[k] = Table{title, std::move(header), {}};
        order.push_back(k);
      }
      return tables[k];
    };
    for (const auto& path : o->in) {
      auto j = codec::parse(read_file(path), path);
      std::string run = label_for(path);
      switch (detect_kind(j, path)) {
        case Kind::kLeakage: {
          std::vector<std::string> header{"run"};
          for (auto k : kAllEntityKinds) header.emplace_back(to_string(k));
          auto& t = table(Kind::kLeakage, "Leakage rate per category (%)", header);
          std::vector<std::string> row{run};
          for (auto k : kAllEntityKinds) {
            const auto& c = j["categories"].value(std::string(to_string(k)), Json::object());
            row.push_back(c.contains("rate") ? num(c["rate"]) : "NA");
          }
          t.rows.push_back(std::move(row));
          break;
        }
        case Kind::kClassifier: {
          auto& t = table(Kind::kClassifier, "Classifier metrics (%)",
                          {"run", "accuracy", "precision", "recall", "f1", "fpr", "fnr", "auc"});
          const auto& e = j["eval"];
          t.rows.push_back({run, num(e["accuracy"]), num(e["precision"]), num(e["recall"]),
                            num(e["f1"]), num(e["fpr"]), num(e["fnr"]),
                            j["roc"].is_null() ? "NA" : num(j["roc"]["auc"], 4)});
          break;
        }
        case Kind::kUtility: {
          auto& t = table(Kind::kUtility, "Utility after redaction (%)",
                          {"run", "engine", "cosine", "bleu", "rouge_l", "residual_entities"});
          for (const char* engine : {"guard", "baseline"}) {
            const auto& u = j[engine];
            t.rows.push_back({run, engine, num(u["cosine"]), num(u["bleu"]), num(u["rouge_l"]),
                              num(u["residual_entities"])});
          }
          break;
        }
        case Kind::kLatency: {
          auto& t = table(Kind::kLatency, "Latency (ms)",
                          {"run", "stage", "mean", "median", "p95", "n"});
          for (const char* stage : {"classifier", "upstream", "redactor", "total"}) {
            const auto& s = j[stage];
            t.rows.push_back({run, stage, num(s["mean"], 3), num(s["median"], 3), num(s["p95"], 3),
                              num(j["count"])});
          }
          break;
        }
        case Kind::kRun: {
          std::vector<std::string> header{"run", "target", "generations", "failures"};
          for (auto k : kAllEntityKinds) header.emplace_back(to_string(k));
          auto& t = table(Kind::kRun, "Extracted entities per category", header);
          std::map<std::string, std::size_t> per_kind;
          for (const auto& g : j["generations"]) {
            for (const auto& e : g["extracted"]) ++per_kind[e["kind"].get<std::string>()];
          }
          std::vector<std::string> row{run, j["manifest"]["target_id"].get<std::string>(),
                                       std::to_string(j["generations"].size()),
                                       num(j["manifest"]["failures"])};
          for (auto k : kAllEntityKinds) row.push_back(std::to_string(per_kind[std::string(to_string(k))]));
          t.rows.push_back(std::move(row));
          break;
        }
        case Kind::kCti: {
          auto& t = table(Kind::kCti, "CTI utility (%)", {"run", "metric", "value"});
          const auto& s = j["summary"];
          if (s.contains("mapping_rates")) {
            for (const auto& [k, v] : s["mapping_rates"].items()) t.rows.push_back({run, k, num(v)});
          }
          t.rows.push_back({run, "technique_exact_rate", num(s["technique_exact_rate"])});
          if (s.contains("technique_group_rate")) {
            t.rows.push_back({run, "technique_group_rate", num(s["technique_group_rate"])});
          }
          break;
        }
      }
    }
    std::string rendered;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i) rendered += "\n";
      rendered += render(tables[order[i]], o->format);
    }
    emit(ctx, o->out, rendered);
  };
}

}  // namespace ctiguard::cli
