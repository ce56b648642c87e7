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


#include "ctiguard/net/gateway.h"

#include <cstdio>
#include <random>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ctiguard/errors.h"
#include "ctiguard/json_codec.h"

namespace ctiguard::net {
namespace {

using Json = nlohmann::ordered_json;

HttpReply reply(int status, const Json& body) { return {status, body.dump()}; }

HttpReply bad_request(const std::string& why) {
  return reply(400, Json{{"status", "error"}, {"error", why}});
}

// Parses the body and pulls a non-empty string field.
std::optional<std::string> required_text(std::string_view body, const char* field, Json* out,
                                         std::string* why) {
  try {
    *out = Json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    *why = "malformed JSON body";
    return std::nullopt;
  }
  if (!out->is_object() || !out->contains(field) || !(*out)[field].is_string()) {
    *why = std::string("missing string field '") + field + "'";
    return std::nullopt;
  }
  auto s = (*out)[field].get<std::string>();
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) {
    *why = std::string("field '") + field + "' is empty";
    return std::nullopt;
  }
  return s;
}

}  // namespace

struct Gateway::Server {
  httplib::Server http;
  int port = -1;
};

Gateway::Gateway(GatewayConfig config, std::shared_ptr<const Guard> guard,
                 std::shared_ptr<CompletionBackend> upstream,
                 std::shared_ptr<CompletionBackend> provider)
    : config_(std::move(config)),
      guard_(std::move(guard)),
      upstream_(std::move(upstream)),
      provider_(std::move(provider)),
      request_base_(std::random_device{}()) {
  if (!guard_) throw ValidationError("gateway: guard is null");
  if (!upstream_) throw ValidationError("gateway: upstream is null");
}

Gateway::~Gateway() { stop(); }

std::unique_ptr<Gateway> Gateway::from_config(const GatewayConfig& config) {
  config.validate();
  auto shots = load_few_shots(config.few_shot);
  GuardOptions opts;
  opts.refusal_message = config.refusal_message;
  opts.verify = config.verify;
  auto guard = std::make_shared<Guard>(shots, std::make_shared<ioc::Scanner>(), opts);
  auto upstream = make_backend(config.upstream, config.timeout_ms);
  auto provider = make_backend(config.guard, config.timeout_ms);
  return std::make_unique<Gateway>(config, std::move(guard), std::move(upstream),
                                   std::move(provider));
}

std::string Gateway::next_request_id() const {
  char buf[40];
  std::snprintf(buf, sizeof buf, "req-%08llx-%06llx",
                static_cast<unsigned long long>(request_base_ & 0xffffffffULL),
                static_cast<unsigned long long>(++request_counter_));
  return buf;
}

HttpReply Gateway::handle_guarded_complete(std::string_view body) const {
  Json req;
  std::string why;
  auto prompt = required_text(body, "prompt", &req, &why);
  if (!prompt) return bad_request(why);
  std::optional<int> max_tokens;
  if (req.contains("max_tokens")) {
    const auto& m = req["max_tokens"];
    if (!m.is_number_integer() || m.get<long long>() < 1 || m.get<long long>() > 1 << 16) {
      return bad_request("max_tokens must be a positive integer");
    }
    max_tokens = m.get<int>();
  }
  auto r = guard_->guarded_complete(*prompt, *upstream_, provider_.get(), max_tokens);
  Json out = {{"status", to_string(r.status)},
              {"text", r.status == GuardStatus::kError ? std::string() : r.text},
              {"request_id", next_request_id()},
              {"timings", codec::to_json(r.timings)}};
  if (r.status == GuardStatus::kError) {
    out["error"] = "upstream failure";
    return reply(502, out);
  }
  return reply(200, out);
}

HttpReply Gateway::handle_classify(std::string_view body) const {
  Json req;
  std::string why;
  auto prompt = required_text(body, "prompt", &req, &why);
  if (!prompt) return bad_request(why);
  auto v = guard_->classify(*prompt, provider_.get());
  Json out = codec::to_json(v);
  out["request_id"] = next_request_id();
  return reply(200, out);
}

HttpReply Gateway::handle_redact(std::string_view body) const {
  Json req;
  std::string why;
  auto text = required_text(body, "text", &req, &why);
  if (!text) return bad_request(why);
  auto r = guard_->redact(*text, provider_.get());
  Json out = {{"text", r.text}, {"engine", to_string(r.engine)}, {"request_id", next_request_id()}};
  return reply(200, out);
}

int Gateway::bind() {
  if (server_) throw BackendError("gateway: already bound");
  server_ = std::make_unique<Server>();
  auto& svr = server_->http;
  auto n = static_cast<std::size_t>(config_.parallelism);
  svr.new_task_queue = [n] { return new httplib::ThreadPool(n); };
  auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  svr.set_read_timeout(timeout);
  svr.set_write_timeout(timeout);

  auto route = [](HttpReply (Gateway::*fn)(std::string_view) const, const Gateway* self) {
    return [fn, self](const httplib::Request& req, httplib::Response& res) {
      HttpReply r = (self->*fn)(req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
  };
  svr.Post("/v1/guarded-complete", route(&Gateway::handle_guarded_complete, this));
  svr.Post("/v1/classify", route(&Gateway::handle_classify, this));
  svr.Post("/v1/redact", route(&Gateway::handle_redact, this));
  svr.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    auto r = handle_healthz();
    res.status = r.status;
    res.set_content(r.body, "text/plain");
  });

  if (config_.port == 0) {
    server_->port = svr.bind_to_any_port(config_.host);
  } else {
    server_->port = svr.bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (server_->port < 0) {
    server_.reset();
    throw BackendError("gateway: cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
  return server_->port;
}

void Gateway::listen() {
  if (!server_) throw BackendError("gateway: listen() before bind()");
  server_->http.listen_after_bind();
}

void Gateway::stop() {
  if (server_) server_->http.stop();
}

}  // namespace ctiguard::net
