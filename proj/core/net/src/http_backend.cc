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


#include "ctiguard/net/http_backend.h"

#include <chrono>
#include <cstdlib>
#include <regex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ctiguard/errors.h"
#include "ctiguard/net/config.h"

namespace ctiguard::net {

ParsedUrl parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?)://([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:]+\])(?::(\d{1,5}))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ValidationError("bad endpoint URL '" + url + "'");
  ParsedUrl u;
  u.scheme = m[1].str();
  u.host = m[2].str();
  u.port = m[3].matched ? std::stoi(m[3].str()) : (u.scheme == "https" ? 443 : 80);
  if (u.port < 1 || u.port > 65535) throw ValidationError("bad port in endpoint URL '" + url + "'");
  u.path = m[4].matched ? m[4].str() : "/";
  return u;
}

bool HttpChatBackend::tls_available() {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  return true;
#else
  return false;
#endif
}

HttpChatBackend::HttpChatBackend(std::string endpoint, std::string model, int timeout_ms)
    : url_(parse_url(endpoint)),
      endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      timeout_ms_(timeout_ms) {
  if (url_.scheme == "https" && !tls_available()) {
    throw ValidationError("https endpoint configured but this build has no TLS support");
  }
  if (timeout_ms_ <= 0) throw ValidationError("http backend: timeout must be > 0");
  if (const char* key = std::getenv(std::string(kApiKeyEnv).c_str())) api_key_ = key;
}

std::string HttpChatBackend::id() const { return "http:" + model_; }

std::string HttpChatBackend::complete(const CompletionRequest& request) {
  nlohmann::json body = {{"model", model_},
                         {"messages", {{{"role", "user"}, {"content", request.prompt}}}}};
  if (request.max_new_tokens) body["max_tokens"] = *request.max_new_tokens;
  if (request.greedy && *request.greedy) body["temperature"] = 0.0;
  else if (request.temperature) body["temperature"] = *request.temperature;
  if (request.seed) body["seed"] = *request.seed;

  httplib::Client cli(url_.scheme + "://" + url_.host + ":" + std::to_string(url_.port));
  auto timeout = std::chrono::milliseconds(timeout_ms_);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = cli.Post(url_.path, headers, body.dump(), "application/json");
  if (!res) {
    throw BackendError(id() + ": request failed (" + httplib::to_string(res.error()) + ")");
  }
  if (res->status != 200) {
    throw BackendError(id() + ": HTTP " + std::to_string(res->status));
  }
  try {
    auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(id() + ": unexpected response body (" + e.what() + ")");
  }
}

}  // namespace ctiguard::net
