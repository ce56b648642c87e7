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


#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.h"
#include "ctiguard/errors.h"

namespace ctiguard::cli {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(Context& ctx, const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    ctx.out << content;
    if (!content.empty() && content.back() != '\n') ctx.out << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << content;
  if (!content.empty() && content.back() != '\n') f << '\n';
}

void emit_json(Context& ctx, const std::string& path, const Json& j) { emit(ctx, path, j.dump(2)); }

std::vector<std::string> read_items(const std::string& path, const std::string& field) {
  std::istringstream in(read_file(path));
  std::vector<std::string> items;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (line[first] == '{') {
      Json j;
      try {
        j = Json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ":" + std::to_string(n) + ": " + e.what());
      }
      if (!j.contains(field) || !j[field].is_string()) {
        throw ValidationError(path + ":" + std::to_string(n) + ": missing field '" + field + "'");
      }
      items.push_back(j[field].get<std::string>());
    } else {
      items.push_back(line);
    }
  }
  return items;
}

std::optional<std::string> config_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(std::string(net::kConfigEnv).c_str()); env && *env) {
    return std::string(env);
  }
  return std::nullopt;
}

GuardSetup guard_setup(const std::string& config_flag) {
  GuardSetup s;
  auto scanner = std::make_shared<ioc::Scanner>();
  if (auto path = config_path(config_flag)) {
    s.config = net::load_config(*path);
    GuardOptions opts;
    opts.refusal_message = s.config->refusal_message;
    opts.verify = s.config->verify;
    s.guard = std::make_shared<Guard>(net::load_few_shots(s.config->few_shot), scanner, opts);
    s.provider = net::make_backend(s.config->guard, s.config->timeout_ms);
  } else {
    s.guard = std::make_shared<Guard>(net::load_few_shots("builtin"), scanner);
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Privacy guard and leakage evaluation for CTI language models", "ctiguard"};
  app.require_subcommand(1);
  app.fallthrough(false);
  Context ctx{out, err, {}};
  add_data_commands(app, ctx);
  add_guard_commands(app, ctx);
  add_report_command(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (const auto* sub : app.get_subcommands()) {
      auto it = ctx.actions.find(sub);
      if (it != ctx.actions.end()) it->second();
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NormalizationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ctiguard::cli
