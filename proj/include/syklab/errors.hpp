// Copyright 2026 The syklab Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace syklab {

/// Operands of incompatible size (qubit counts, bins, grids).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input outside an operation's documented domain.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a precondition on an otherwise valid object
/// (non-Hermitian operator, missing eigenvectors, unnormalized state).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

struct UnsupportedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The requested object would not fit in the configured memory budget.
struct ResourceError : std::runtime_error {
  ResourceError(const std::string& what, std::size_t required)
      : std::runtime_error(what), required_bytes(required) {}
  std::size_t required_bytes;
};

struct DegenerateDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least-squares design matrix without full column rank.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two records share a key but disagree on payload.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace syklab
