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

#include "ctiguard/backend.h"

#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard {

MockModelBackend::MockModelBackend(std::shared_ptr<const NGramModel> model,
                                   DecodeParams defaults)
    : model_(std::move(model)), defaults_(defaults) {
  if (!model_) throw ValidationError("mock backend: model is null");
  defaults_.validate();
}

std::string MockModelBackend::id() const {
  return "mock-ngram-" + std::to_string(model_->order());
}

DecodeParams MockModelBackend::effective_params(const CompletionRequest& request) const {
  DecodeParams p = defaults_;
  if (request.max_new_tokens) p.max_new_tokens = *request.max_new_tokens;
  if (request.temperature) p.temperature = *request.temperature;
  if (request.top_k) p.top_k = *request.top_k;
  if (request.seed) p.rng_seed = *request.seed;
  if (request.greedy) p.greedy = *request.greedy;
  return p;
}

std::string MockModelBackend::complete(const CompletionRequest& request) {
  auto tokens = text::split_whitespace(request.prompt);
  if (tokens.empty()) throw BackendError("mock backend: empty prompt");
  DecodeParams p = effective_params(request);
  try {
    p.validate();
  } catch (const ValidationError& e) {
    throw BackendError(std::string("mock backend: ") + e.what());
  }
  auto out = model_->decode(tokens, p);
  return text::join(out, " ");
}

ScriptedBackend::ScriptedBackend(std::string reply, std::string id)
    : script_([reply = std::move(reply)](const CompletionRequest&) { return reply; }),
      id_(std::move(id)) {}

ScriptedBackend::ScriptedBackend(Script script, std::string id)
    : script_(std::move(script)), id_(std::move(id)) {}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
  ++calls_;
  if (failing_) throw BackendError(id_ + ": scripted failure");
  return script_(request);
}

ReplayBackend::ReplayBackend(std::map<std::string, std::string> recorded, std::string id)
    : recorded_(std::move(recorded)), id_(std::move(id)) {}

std::string ReplayBackend::complete(const CompletionRequest& request) {
  auto it = recorded_.find(request.prompt);
  if (it == recorded_.end()) throw BackendError(id_ + ": no recorded output for prompt");
  return it->second;
}

}  // namespace ctiguard
