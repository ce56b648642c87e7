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


// Remote chat-completion provider over HTTP(S).

#pragma once

#include <string>

#include "ctiguard/backend.h"

namespace ctiguard::net {

struct ParsedUrl {
  std::string scheme;  // http or https
  std::string host;
  int port = 0;
  std::string path;
};

/// Throws ValidationError on anything but http(s)://host[:port][/path].
ParsedUrl parse_url(const std::string& url);

/// POSTs {"model", "messages": [{"role": "user", "content": prompt}]} and
/// returns choices[0].message.content. The bearer token comes from
/// CTIGUARD_API_KEY when set.
class HttpChatBackend : public CompletionBackend {
 public:
  HttpChatBackend(std::string endpoint, std::string model, int timeout_ms);

  std::string id() const override;
  std::string complete(const CompletionRequest& request) override;

  /// True when the build can reach https endpoints.
  static bool tls_available();

 private:
  ParsedUrl url_;
  std::string endpoint_;
  std::string model_;
  int timeout_ms_;
  std::string api_key_;
};

}  // namespace ctiguard::net
