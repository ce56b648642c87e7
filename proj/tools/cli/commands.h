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


// Shared plumbing for the subcommand implementations.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ctiguard/backend.h"
#include "ctiguard/guard.h"
#include "ctiguard/net/config.h"

namespace ctiguard::cli {

using Json = nlohmann::ordered_json;

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::map<const CLI::App*, std::function<void()>> actions;
};

std::string read_file(const std::string& path);
/// Writes to `path`, or to ctx.out when path is empty or "-".
void emit(Context& ctx, const std::string& path, const std::string& content);
void emit_json(Context& ctx, const std::string& path, const Json& j);

/// One item per non-blank line; a line holding a JSON object contributes its
/// `field` member.
std::vector<std::string> read_items(const std::string& path, const std::string& field);

/// --config, else $CTIGUARD_CONFIG, else none.
std::optional<std::string> config_path(const std::string& flag);

struct GuardSetup {
  std::shared_ptr<Guard> guard;
  std::shared_ptr<CompletionBackend> provider;  // null: rule engines
  std::optional<net::GatewayConfig> config;
};

GuardSetup guard_setup(const std::string& config_flag);

void add_data_commands(CLI::App& app, Context& ctx);
void add_guard_commands(CLI::App& app, Context& ctx);
void add_report_command(CLI::App& app, Context& ctx);

}  // namespace ctiguard::cli
