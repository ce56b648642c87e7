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

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.h"

namespace fs = std::filesystem;
using json = nlohmann::json;
using ctiguard::cli::run;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out call(std::vector<std::string> args) {
  args.insert(args.begin(), "ctiguard");
  std::ostringstream o, e;
  int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ctiguard_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

const std::string kFixtures = CTIGUARD_FIXTURES_DIR;

}  // namespace

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(call({"--help"}).code, 0);
  auto unknown = call({"detect", "--bogus"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_EQ(call({"no-such-command"}).code, 1);
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"ingest", "--in", path("missing.jsonl")}).code, 1);
  auto serve = call({"serve", "--config", path("missing.toml")});
  EXPECT_EQ(serve.code, 1);
  EXPECT_NE(serve.err.find("missing.toml"), std::string::npos) << serve.err;
}

TEST_F(CliTest, ParseErrorsAreValidationExits) {
  std::ofstream(path("bad.jsonl")) << "{\"id\":\"a\",\"prompt\":\"p\"}\n";
  EXPECT_EQ(call({"ingest", "--in", path("bad.jsonl")}).code, 1);
}

TEST_F(CliTest, DetectAndRedact) {
  auto d = call({"detect", "--text", "reach 154[.]121[.]1[.]1 now"});
  ASSERT_EQ(d.code, 0) << d.err;
  auto j = json::parse(d.out);
  ASSERT_EQ(j["entities"].size(), 1u);
  EXPECT_EQ(j["entities"][0]["normalized"], "154.121.1.1");

  auto r = call({"redact", "--text",
                 "The server is reachable at 154[.]121[.]1[.]1 through the internal VPN."});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["text"], "The server is reachable through the internal VPN.");

  auto c = call({"classify", "--prompt", "Some malware uses shash@."});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(json::parse(c.out)["label"], "harmful");

  auto m = call({"baseline-mask", "--text", "Contact us at john.doe@example.com for more info"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_NE(m.out.find("<Email_Address>"), std::string::npos);
}

TEST_F(CliTest, SynthAttackLeakageReportPipeline) {
  auto s = call({"synth", "--seed", "7", "--records", "6", "--entities", "6", "--out",
                 path("corpus.jsonl"), "--manifest", path("manifest.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  auto i = call({"inventory", "--manifest", path("manifest.json"), "--out", path("inv.json")});
  ASSERT_EQ(i.code, 0) << i.err;
  auto a = call({"attack", "--corpus", path("corpus.jsonl"), "--greedy", "--out",
                 path("run.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  auto l = call({"leakage", "--run", path("run.json"), "--inventory", path("inv.json"), "--out",
                 path("leak.json")});
  ASSERT_EQ(l.code, 0) << l.err;
  auto leak = json::parse(slurp(path("leak.json")));
  double any = 0;
  for (auto& [k, v] : leak["categories"].items()) any += v["rate"].is_null() ? 0.0 : v["rate"].get<double>();
  EXPECT_GT(any, 0.0);

  auto d = call({"attack", "--corpus", path("corpus.jsonl"), "--greedy", "--defend", "--out",
                 path("run_def.json")});
  ASSERT_EQ(d.code, 0) << d.err;
  auto ld = call({"leakage", "--run", path("run_def.json"), "--inventory", path("inv.json"),
                  "--out", path("leak_def.json")});
  ASSERT_EQ(ld.code, 0) << ld.err;
  auto leak_def = json::parse(slurp(path("leak_def.json")));
  for (auto& [k, v] : leak_def["categories"].items()) {
    if (!v["rate"].is_null()) EXPECT_EQ(v["rate"].get<double>(), 0.0) << k;
  }

  auto rep = call({"report", "--in", path("leak.json"), "--in", path("leak_def.json"), "--format",
                   "csv"});
  ASSERT_EQ(rep.code, 0) << rep.err;
  std::istringstream lines(rep.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "run,IpAddress,EmailAddress,PortNumber,DomainName,SoftwareVersion");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) rows += !line.empty();
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(call({"report", "--in", path("leak.json"), "--format", "markdown"}).code, 0);
  EXPECT_EQ(call({"report", "--in", path("leak.json"), "--format", "yaml"}).code, 1);
}

TEST_F(CliTest, Evaluations) {
  auto ec = call({"evaluate-classifier", "--builtin", "--out", path("cls.json")});
  ASSERT_EQ(ec.code, 0) << ec.err;
  auto cls = json::parse(slurp(path("cls.json")));
  EXPECT_EQ(cls["n"], 23);
  EXPECT_DOUBLE_EQ(cls["eval"]["accuracy"].get<double>(), 100.0);

  auto er = call({"evaluate-redactor", "--builtin", "--out", path("red.json")});
  ASSERT_EQ(er.code, 0) << er.err;
  auto red = json::parse(slurp(path("red.json")));
  EXPECT_TRUE(red.contains("guard"));
  EXPECT_TRUE(red.contains("baseline"));

  auto ce = call({"cti-eval", "--in", kFixtures + "/cti_pairs.jsonl", "--cve-table",
                  kFixtures + "/cve_table.json", "--out", path("cti.json")});
  ASSERT_EQ(ce.code, 0) << ce.err;
  auto cti = json::parse(slurp(path("cti.json")));
  EXPECT_EQ(cti["items"].size(), 4u);

  auto bl = call({"bench-latency", "--requests", "50", "--out", path("lat.json")});
  ASSERT_EQ(bl.code, 0) << bl.err;
  auto lat = json::parse(slurp(path("lat.json")));
  EXPECT_EQ(lat["count"], 50);
  for (const char* stage : {"classifier", "upstream", "redactor", "total"}) {
    for (const char* stat : {"mean", "median", "p95"}) {
      EXPECT_TRUE(lat[stage].contains(stat)) << stage << "." << stat;
    }
  }
  for (const char* in : {"cls.json", "red.json", "lat.json", "cti.json"}) {
    auto r = call({"report", "--in", path(in)});
    EXPECT_EQ(r.code, 0) << in << ": " << r.err;
    EXPECT_FALSE(r.out.empty());
  }
}

TEST_F(CliTest, IngestRewritesCorpus) {
  auto r = call({"ingest", "--in", kFixtures + "/sample_corpus.jsonl", "--out", path("c.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto back = call({"ingest", "--in", path("c.jsonl")});
  EXPECT_EQ(back.code, 0) << back.err;
}
