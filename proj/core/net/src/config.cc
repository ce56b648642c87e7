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


#include "ctiguard/net/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "ctiguard/corpus.h"
#include "ctiguard/errors.h"
#include "ctiguard/net/http_backend.h"

namespace ctiguard::net {
namespace {

void check_keys(const toml::table& t, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, v] : t) {
    if (!known.count(std::string(k.str()))) {
      throw ValidationError("config: unknown key '" + std::string(k.str()) + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const toml::table& t, std::string_view key, T fallback, const std::string& where) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) return *v;
  } else if (auto v = node->value<T>()) {
    return *v;
  }
  throw ValidationError("config: wrong type for '" + std::string(key) + "' in " + where);
}

std::string resolve(const std::string& p, const std::filesystem::path& base) {
  if (p.empty() || base.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (base / p).string();
}

BackendSpec parse_backend(const toml::table& t, const std::string& where,
                          const std::filesystem::path& base) {
  check_keys(t,
             {"kind", "model_path", "corpus", "order", "top_k", "temperature",
              "repetition_penalty", "no_repeat_ngram", "max_new_tokens", "seed", "greedy",
              "endpoint", "model"},
             where);
  BackendSpec s;
  auto kind = get_or<std::string>(t, "kind", "fallback", where);
  if (kind == "mock") s.kind = BackendKind::kMock;
  else if (kind == "http") s.kind = BackendKind::kHttp;
  else if (kind == "fallback") s.kind = BackendKind::kFallback;
  else throw ValidationError("config: unknown backend kind '" + kind + "' in " + where);
  s.model_path = resolve(get_or<std::string>(t, "model_path", "", where), base);
  s.corpus_path = resolve(get_or<std::string>(t, "corpus", "", where), base);
  s.order = static_cast<int>(get_or<int64_t>(t, "order", s.order, where));
  s.decode.top_k = static_cast<int>(get_or<int64_t>(t, "top_k", s.decode.top_k, where));
  s.decode.temperature = get_or<double>(t, "temperature", s.decode.temperature, where);
  s.decode.repetition_penalty =
      get_or<double>(t, "repetition_penalty", s.decode.repetition_penalty, where);
  s.decode.no_repeat_ngram =
      static_cast<int>(get_or<int64_t>(t, "no_repeat_ngram", s.decode.no_repeat_ngram, where));
  s.decode.max_new_tokens =
      static_cast<int>(get_or<int64_t>(t, "max_new_tokens", s.decode.max_new_tokens, where));
  s.decode.rng_seed = static_cast<std::uint64_t>(get_or<int64_t>(t, "seed", 0, where));
  s.decode.greedy = get_or<bool>(t, "greedy", s.decode.greedy, where);
  s.endpoint = get_or<std::string>(t, "endpoint", "", where);
  s.model = get_or<std::string>(t, "model", "", where);
  return s;
}

void validate_backend(const BackendSpec& s, const std::string& where) {
  switch (s.kind) {
    case BackendKind::kMock:
      if (s.model_path.empty() && s.corpus_path.empty()) {
        throw ValidationError("config: " + where + " mock backend needs model_path or corpus");
      }
      if (s.order < 2) throw ValidationError("config: " + where + " order must be >= 2");
      try {
        s.decode.validate();
      } catch (const ValidationError& e) {
        throw ValidationError("config: " + where + ": " + e.what());
      }
      break;
    case BackendKind::kHttp:
      if (s.endpoint.empty()) throw ValidationError("config: " + where + " http backend needs endpoint");
      if (s.model.empty()) throw ValidationError("config: " + where + " http backend needs model");
      parse_url(s.endpoint);
      break;
    case BackendKind::kFallback:
      break;
  }
}

}  // namespace

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kMock: return "mock";
    case BackendKind::kHttp: return "http";
    case BackendKind::kFallback: return "fallback";
  }
  return "fallback";
}

std::pair<std::string, int> parse_listen(std::string_view listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ValidationError("config: listen must be host:port, got '" + std::string(listen) + "'");
  }
  std::string port(listen.substr(colon + 1));
  if (port.empty() || port.size() > 5 ||
      port.find_first_not_of("0123456789") != std::string::npos || std::stoi(port) > 65535) {
    throw ValidationError("config: bad port in listen '" + std::string(listen) + "'");
  }
  return {std::string(listen.substr(0, colon)), std::stoi(port)};
}

void GatewayConfig::validate() const {
  if (port < 0 || port > 65535) throw ValidationError("config: port out of range");
  if (timeout_ms <= 0) throw ValidationError("config: timeout_ms must be > 0");
  if (parallelism < 1) throw ValidationError("config: parallelism must be >= 1");
  if (refusal_message.empty()) throw ValidationError("config: refusal_message is empty");
  if (upstream.kind == BackendKind::kFallback) {
    throw ValidationError("config: upstream must be a mock or http backend");
  }
  validate_backend(upstream, "[upstream]");
  validate_backend(guard, "[guard]");
  baseline.validate();
}

GatewayConfig parse_config(std::string_view src, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(src);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << e.description() << " at line " << e.source().begin.line;
    throw ParseError(msg.str());
  }
  check_keys(root,
             {"listen", "few_shot", "refusal_message", "verify", "parallelism", "timeout_ms",
              "upstream", "guard", "baseline"},
             "top level");
  GatewayConfig c;
  if (auto listen = root["listen"].value<std::string>()) {
    std::tie(c.host, c.port) = parse_listen(*listen);
  } else if (root.contains("listen")) {
    throw ValidationError("config: listen must be a string");
  }
  c.few_shot = get_or<std::string>(root, "few_shot", c.few_shot, "top level");
  if (c.few_shot != "builtin") c.few_shot = resolve(c.few_shot, base_dir);
  c.refusal_message = get_or<std::string>(root, "refusal_message", c.refusal_message, "top level");
  c.verify = get_or<bool>(root, "verify", c.verify, "top level");
  c.parallelism = static_cast<int>(get_or<int64_t>(root, "parallelism", c.parallelism, "top level"));
  c.timeout_ms = static_cast<int>(get_or<int64_t>(root, "timeout_ms", c.timeout_ms, "top level"));
  if (auto* t = root["upstream"].as_table()) c.upstream = parse_backend(*t, "[upstream]", base_dir);
  if (auto* t = root["guard"].as_table()) c.guard = parse_backend(*t, "[guard]", base_dir);
  if (auto* t = root["baseline"].as_table()) {
    check_keys(*t, {"mode"}, "[baseline]");
    auto mode = get_or<std::string>(*t, "mode", "canonical", "[baseline]");
    auto m = baseline::mask_mode_from_string(mode);
    if (!m) throw ValidationError("config: unknown baseline mode '" + mode + "'");
    c.baseline.mode = *m;
  }
  c.validate();
  return c;
}

GatewayConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::shared_ptr<CompletionBackend> make_backend(const BackendSpec& spec, int timeout_ms) {
  switch (spec.kind) {
    case BackendKind::kFallback:
      return nullptr;
    case BackendKind::kHttp:
      return std::make_shared<HttpChatBackend>(spec.endpoint, spec.model, timeout_ms);
    case BackendKind::kMock: {
      std::shared_ptr<NGramModel> model;
      if (!spec.model_path.empty()) {
        std::ifstream in(spec.model_path);
        if (!in) throw ValidationError("mock backend: cannot open model " + spec.model_path);
        std::stringstream ss;
        ss << in.rdbuf();
        model = std::make_shared<NGramModel>(NGramModel::from_json(ss.str()));
      } else {
        model = std::make_shared<NGramModel>(NGramModel::train(load_corpus(spec.corpus_path), spec.order));
      }
      return std::make_shared<MockModelBackend>(std::move(model), spec.decode);
    }
  }
  return nullptr;
}

std::shared_ptr<const FewShotSet> load_few_shots(const std::string& path_or_builtin) {
  if (path_or_builtin.empty() || path_or_builtin == "builtin") {
    return std::make_shared<FewShotSet>(FewShotSet::builtin());
  }
  return std::make_shared<FewShotSet>(FewShotSet::load(path_or_builtin));
}

}  // namespace ctiguard::net
