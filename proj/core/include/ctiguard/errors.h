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

#include <stdexcept>
#include <string>

namespace ctiguard {

/// Input that does not follow a wire format (bad JSON, missing fields).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a documented invariant or precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A candidate entity string that fails its kind's shape rules.
class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model training preconditions not met (e.g. corpus too small).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A completion backend could not produce a completion.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctiguard
