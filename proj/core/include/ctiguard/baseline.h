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


// Pattern-only detection with typed placeholder masking, the comparison point
// for the guard's rewriting redactor.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctiguard/corpus.h"
#include "ctiguard/entity.h"
#include "ctiguard/ioc_detect.h"
#include "ctiguard/metrics.h"

namespace ctiguard::baseline {

enum class MaskMode { kCanonical, kExtended };

std::string_view to_string(MaskMode mode);
std::optional<MaskMode> mask_mode_from_string(std::string_view s);

struct MaskPolicy {
  MaskMode mode = MaskMode::kCanonical;
  std::map<EntityKind, std::string> markers = default_markers();

  static std::map<EntityKind, std::string> default_markers();
  /// Throws ValidationError on an empty or duplicated marker.
  void validate() const;
};

struct MaskMatch {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityKind kind;
};

/// Merged, non-overlapping match intervals in text order. Overlapping
/// candidates are unioned; the merged interval takes the kind of its widest
/// candidate.
std::vector<MaskMatch> find_matches(std::string_view text, MaskMode mode);

std::string mask(std::string_view text, const MaskPolicy& policy);

/// Masks every text, then scores what the full detector still finds.
metrics::LeakageReport residual_leakage(std::span<const std::string> texts,
                                        const SensitiveInventory& inventory,
                                        const MaskPolicy& policy, const ioc::Scanner& scanner);

}  // namespace ctiguard::baseline
