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

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ctiguard {

/// The five sensitive categories tracked for leakage.
enum class EntityKind {
  kIpAddress,
  kEmailAddress,
  kPortNumber,
  kDomainName,
  kSoftwareVersion,
};

inline constexpr std::array<EntityKind, 5> kAllEntityKinds = {
    EntityKind::kIpAddress,  EntityKind::kEmailAddress,
    EntityKind::kPortNumber, EntityKind::kDomainName,
    EntityKind::kSoftwareVersion,
};

/// Stable wire name ("IpAddress", "EmailAddress", ...).
std::string_view to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view name);

/// A detected sensitive item. Offsets are byte offsets into the scanned text;
/// `raw` is exactly text[start, end) and `normalized` its canonical form.
struct EntitySpan {
  EntityKind kind;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string raw;
  std::string normalized;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

}  // namespace ctiguard
