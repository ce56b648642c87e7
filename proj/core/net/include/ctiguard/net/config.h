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


// Gateway and backend configuration, read from TOML.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ctiguard/backend.h"
#include "ctiguard/baseline.h"
#include "ctiguard/guard.h"
#include "ctiguard/ngram_model.h"

namespace ctiguard::net {

inline constexpr std::string_view kApiKeyEnv = "CTIGUARD_API_KEY";
inline constexpr std::string_view kConfigEnv = "CTIGUARD_CONFIG";

enum class BackendKind {
  kMock,      // in-process n-gram model
  kHttp,      // OpenAI-compatible chat completions endpoint
  kFallback,  // no provider; guard uses its rule engines
};

std::string_view to_string(BackendKind kind);

struct BackendSpec {
  BackendKind kind = BackendKind::kFallback;
  // mock
  std::string model_path;   // saved model JSON
  std::string corpus_path;  // or a corpus to train on at startup
  int order = 4;
  DecodeParams decode;
  // http
  std::string endpoint;
  std::string model;
};

struct GatewayConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  BackendSpec upstream;
  BackendSpec guard;
  std::string few_shot = "builtin";
  std::string refusal_message{kDefaultRefusalMessage};
  bool verify = true;
  int parallelism = 4;
  int timeout_ms = 30000;
  baseline::MaskPolicy baseline;

  /// Throws ValidationError on a bad value.
  void validate() const;
};

/// Relative paths inside the file resolve against `base_dir`.
GatewayConfig parse_config(std::string_view toml, const std::filesystem::path& base_dir = {});
/// Throws ValidationError if the file is missing, ParseError if malformed.
GatewayConfig load_config(const std::filesystem::path& path);

/// Splits "host:port"; throws ValidationError.
std::pair<std::string, int> parse_listen(std::string_view listen);

/// Builds the backend a spec describes; null for kFallback. Throws
/// ValidationError when the spec cannot be resolved.
std::shared_ptr<CompletionBackend> make_backend(const BackendSpec& spec, int timeout_ms);

std::shared_ptr<const FewShotSet> load_few_shots(const std::string& path_or_builtin);

}  // namespace ctiguard::net
