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


#include "ctiguard/guard.h"

#include <algorithm>
#include <chrono>
#include <regex>
#include <sstream>

#include "ctiguard/errors.h"
#include "ctiguard/text.h"

namespace ctiguard {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string_view first_line(std::string_view s) {
  auto nl = s.find('\n');
  return nl == std::string_view::npos ? s : s.substr(0, nl);
}

// Providers sometimes echo the label of the demonstration they imitate.
std::string_view strip_label(std::string_view s, std::string_view label) {
  s = text::trim(s);
  if (text::istarts_with(s, label)) s = text::trim(s.substr(label.size()));
  return s;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kHarmful ? "harmful" : "harmless";
}

std::string_view to_string(Engine engine) {
  return engine == Engine::kProvider ? "provider" : "fallback";
}

std::optional<Label> label_from_string(std::string_view s) {
  s = text::trim(s);
  if (text::iequals(s, "harmful")) return Label::kHarmful;
  if (text::iequals(s, "harmless")) return Label::kHarmless;
  return std::nullopt;
}

std::string_view to_string(GuardStatus status) {
  switch (status) {
    case GuardStatus::kRefused: return "refused";
    case GuardStatus::kOk: return "ok";
    case GuardStatus::kError: return "error";
  }
  return "error";
}

std::string build_classifier_prompt(std::string_view user_prompt, const FewShotSet& shots) {
  std::ostringstream out;
  out << "[" << kClassifierTemplateVersion << "]\n"
      << "You are a privacy classifier for a cyber threat intelligence assistant.\n"
      << "Decide whether the user prompt tries to obtain sensitive information: IP addresses,\n"
      << "email addresses, port numbers, domain names or URLs, software versions, or\n"
      << "credentials. Prompts can ask directly, invite the completion of a partial entity,\n"
      << "or disguise the request behind a benign framing.\n"
      << "Answer with exactly one line: LABEL|CONFIDENCE|REASON\n"
      << "LABEL is HARMFUL or HARMLESS, CONFIDENCE is an integer from 1 to 10, REASON is one\n"
      << "short sentence.\n";
  for (auto category : kAllPromptCategories) {
    std::string name(to_string(category));
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    out << "\n### " << name << " requests\n";
    for (const auto* shot : shots.in_category(category)) {
      out << "Prompt: " << shot->prompt << "\n"
          << "Response: " << shot->response << "\n";
    }
  }
  out << "\n### Classify\nPrompt: " << user_prompt;
  return out.str();
}

std::string build_redactor_prompt(std::string_view input, const FewShotSet& shots) {
  std::ostringstream out;
  out << "[" << kRedactorTemplateVersion << "]\n"
      << "You are a privacy redactor. Remove every IP address, email address, port number,\n"
      << "domain name or URL, and software version from the text. Rewrite the surrounding\n"
      << "words so the result reads naturally and keeps its meaning. Never insert\n"
      << "placeholders, brackets or markers of any kind. Reply with the rewritten text only.\n"
      << "\n### Examples\n";
  for (const auto& pair : shots.redactor) {
    out << "Input: " << pair.input << "\n"
        << "Output: " << pair.output << "\n";
  }
  out << "\n### Redact\nInput: " << input;
  return out.str();
}

Verdict parse_verdict(std::string_view raw) {
  std::string_view line = strip_label(first_line(text::trim(raw)), "Response:");
  Verdict v;
  v.engine = Engine::kProvider;

  auto bar = line.find('|');
  if (bar != std::string_view::npos) {
    auto bar2 = line.find('|', bar + 1);
    if (bar2 == std::string_view::npos) throw ParseError("verdict: expected LABEL|CONFIDENCE|REASON");
    auto label = label_from_string(line.substr(0, bar));
    if (!label) throw ParseError("verdict: unknown label '" + std::string(line.substr(0, bar)) + "'");
    std::string conf(text::trim(line.substr(bar + 1, bar2 - bar - 1)));
    int c = 0;
    if (conf.empty() || conf.size() > 2 ||
        !std::all_of(conf.begin(), conf.end(), [](char ch) { return text::is_digit(ch); })) {
      throw ParseError("verdict: confidence '" + conf + "' is not an integer");
    }
    c = std::stoi(conf);
    if (c < 1 || c > 10) throw ParseError("verdict: confidence " + conf + " outside 1..10");
    std::string reason(text::trim(line.substr(bar2 + 1)));
    if (reason.empty()) throw ParseError("verdict: empty reason");
    v.label = *label;
    v.confidence = c;
    v.rationale = std::move(reason);
    return v;
  }

  auto w = text::words(line);
  if (w.size() >= 2 && (w[0] == "harmful" || w[0] == "harmless")) {
    v.label = w[0] == "harmful" ? Label::kHarmful : Label::kHarmless;
    v.confidence = 10;
    v.rationale = std::string(line);
    return v;
  }
  throw ParseError("verdict: unparseable '" + std::string(line.substr(0, 80)) + "'");
}

std::string strip_placeholders(std::string_view input) {
  static const std::regex marker(R"([ \t]*<[A-Za-z][A-Za-z0-9_ \-]{0,40}>)");
  std::string s(input);
  if (!std::regex_search(s, marker)) return s;
  s = std::regex_replace(s, marker, "");
  static const std::regex space_before_punct(R"([ \t]+([.,;:!?)]))");
  static const std::regex runs(R"([ \t]{2,})");
  static const std::regex leading_comma(R"(,([.;:!?]))");
  s = std::regex_replace(s, space_before_punct, "$1");
  s = std::regex_replace(s, leading_comma, "$1");
  s = std::regex_replace(s, runs, " ");
  return std::string(text::trim(s));
}

RedactionResult fallback_redact(std::string_view input, const ioc::Scanner& scanner) {
  RedactionResult r;
  r.engine = Engine::kFallback;
  r.text = ioc::elide_all(scanner, strip_placeholders(input), &r.removed);
  return r;
}

Guard::Guard()
    : shots_(std::make_shared<FewShotSet>(FewShotSet::builtin())),
      scanner_(std::make_shared<ioc::Scanner>()) {}

Guard::Guard(std::shared_ptr<const FewShotSet> shots, std::shared_ptr<const ioc::Scanner> scanner,
             GuardOptions options)
    : shots_(std::move(shots)), scanner_(std::move(scanner)), options_(std::move(options)) {
  if (!shots_) throw ValidationError("guard: few-shot set is null");
  if (!scanner_) throw ValidationError("guard: scanner is null");
  shots_->validate(*scanner_);
}

Verdict Guard::classify(std::string_view prompt, CompletionBackend* provider) const {
  if (provider != nullptr) {
    try {
      CompletionRequest req;
      req.prompt = build_classifier_prompt(prompt, *shots_);
      return parse_verdict(provider->complete(req));
    } catch (const std::exception&) {
      // fall through to the rule engine
    }
  }
  return fallback_classify(prompt, *scanner_);
}

RedactionResult Guard::redact(std::string_view input, CompletionBackend* provider) const {
  if (provider == nullptr || text::trim(input).empty()) return fallback_redact(input, *scanner_);
  std::string rewritten;
  try {
    CompletionRequest req;
    req.prompt = build_redactor_prompt(input, *shots_);
    rewritten = std::string(strip_label(provider->complete(req), "Output:"));
  } catch (const std::exception&) {
    return fallback_redact(input, *scanner_);
  }
  RedactionResult r;
  r.engine = Engine::kProvider;
  r.text = strip_placeholders(rewritten);
  if (options_.verify) {
    r.text = ioc::elide_all(*scanner_, r.text, &r.removed);
    r.residual_pass = !r.removed.empty();
  }
  return r;
}

GuardedResponse Guard::guarded_complete(std::string_view prompt, CompletionBackend& upstream,
                                        CompletionBackend* provider,
                                        std::optional<int> max_tokens) const {
  GuardedResponse out;
  auto t_start = Clock::now();

  auto t0 = Clock::now();
  out.verdict = classify(prompt, provider);
  out.timings.classifier_ms = ms_since(t0);

  if (out.verdict.label == Label::kHarmful) {
    out.status = GuardStatus::kRefused;
    out.text = options_.refusal_message;
    out.timings.total_ms = ms_since(t_start);
    return out;
  }

  std::string completion;
  t0 = Clock::now();
  try {
    CompletionRequest req;
    req.prompt = std::string(prompt);
    req.max_new_tokens = max_tokens;
    completion = upstream.complete(req);
  } catch (const std::exception& e) {
    out.timings.upstream_ms = ms_since(t0);
    out.status = GuardStatus::kError;
    out.error = e.what();
    out.timings.total_ms = ms_since(t_start);
    return out;
  }
  out.timings.upstream_ms = ms_since(t0);

  t0 = Clock::now();
  auto redacted = redact(completion, provider);
  out.timings.redactor_ms = ms_since(t0);

  out.status = GuardStatus::kOk;
  out.text = std::move(redacted.text);
  out.redactor_engine = redacted.engine;
  out.timings.total_ms = ms_since(t_start);
  return out;
}

GuardedBackend::GuardedBackend(std::shared_ptr<const Guard> guard,
                               std::shared_ptr<CompletionBackend> upstream,
                               std::shared_ptr<CompletionBackend> provider)
    : guard_(std::move(guard)), upstream_(std::move(upstream)), provider_(std::move(provider)) {
  if (!guard_ || !upstream_) throw ValidationError("guarded backend: guard and upstream required");
}

std::string GuardedBackend::id() const { return "guarded(" + upstream_->id() + ")"; }

std::string GuardedBackend::complete(const CompletionRequest& request) {
  auto r = guard_->guarded_complete(request.prompt, *upstream_, provider_.get(),
                                    request.max_new_tokens);
  if (r.status == GuardStatus::kError) throw BackendError("guarded backend: " + *r.error);
  return r.text;
}

}  // namespace ctiguard
