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


// HTTP guard gateway. Handlers are plain functions of the request body so
// they can be exercised without a socket.

#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <string_view>

#include "ctiguard/backend.h"
#include "ctiguard/guard.h"
#include "ctiguard/net/config.h"

namespace ctiguard::net {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON, or "ok" for /healthz
};

class Gateway {
 public:
  Gateway(GatewayConfig config, std::shared_ptr<const Guard> guard,
          std::shared_ptr<CompletionBackend> upstream, std::shared_ptr<CompletionBackend> provider);
  ~Gateway();

  /// Resolves backends and the few-shot set; throws ValidationError.
  static std::unique_ptr<Gateway> from_config(const GatewayConfig& config);

  HttpReply handle_guarded_complete(std::string_view body) const;
  HttpReply handle_classify(std::string_view body) const;
  HttpReply handle_redact(std::string_view body) const;
  HttpReply handle_healthz() const { return {200, "ok"}; }

  /// Binds the configured address (port 0 picks a free one) and returns the
  /// bound port; throws BackendError if binding fails.
  int bind();
  /// Serves until stop(). Requires bind().
  void listen();
  void stop();

  const GatewayConfig& config() const { return config_; }

 private:
  std::string next_request_id() const;

  struct Server;
  GatewayConfig config_;
  std::shared_ptr<const Guard> guard_;
  std::shared_ptr<CompletionBackend> upstream_;
  std::shared_ptr<CompletionBackend> provider_;
  std::unique_ptr<Server> server_;
  mutable std::atomic<std::uint64_t> request_counter_{0};
  std::uint64_t request_base_;
};

}  // namespace ctiguard::net
