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

#include "ctiguard/entity.h"

namespace ctiguard {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kIpAddress:
      return "IpAddress";
    case EntityKind::kEmailAddress:
      return "EmailAddress";
    case EntityKind::kPortNumber:
      return "PortNumber";
    case EntityKind::kDomainName:
      return "DomainName";
    case EntityKind::kSoftwareVersion:
      return "SoftwareVersion";
  }
  return "Unknown";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view name) {
  for (EntityKind k : kAllEntityKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace ctiguard
