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


// JSON forms of the artifacts the CLI and gateway write and read back.

#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "ctiguard/attack.h"
#include "ctiguard/cti_utility.h"
#include "ctiguard/entity.h"
#include "ctiguard/guard.h"
#include "ctiguard/metrics.h"
#include "ctiguard/ngram_model.h"

namespace ctiguard::codec {

using Json = nlohmann::ordered_json;

Json to_json(const EntitySpan& span);
EntitySpan entity_span_from_json(const Json& j);

Json to_json(const DecodeParams& params);
DecodeParams decode_params_from_json(const Json& j);

Json to_json(const Prefix& prefix);
Json to_json(const GenerationRecord& generation);
Json to_json(const ExtractionRun& run);
/// Throws ParseError on a malformed document.
ExtractionRun extraction_run_from_json(const Json& j);

Json to_json(const Verdict& verdict);
Json to_json(const RedactionResult& result);
Json to_json(const StageTimings& timings);
StageTimings stage_timings_from_json(const Json& j);

Json to_json(const metrics::LeakageReport& report);
metrics::LeakageReport leakage_report_from_json(const Json& j);
Json to_json(const metrics::ClassifierEval& eval);
Json to_json(const metrics::RocCurve& roc);
Json to_json(const metrics::Summary& summary);
Json to_json(const metrics::LatencyStats& stats);

Json to_json(const cti::MappingOutcome& outcome);

/// Parses text, rethrowing syntax errors as ParseError.
Json parse(std::string_view text, std::string_view what);

}  // namespace ctiguard::codec
