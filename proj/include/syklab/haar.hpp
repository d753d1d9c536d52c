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

#include <cstdint>
#include <string_view>
#include <vector>

#include "syklab/pauli.hpp"

namespace syklab {

/// Gaussian real and imaginary parts, normalized: unitarily invariant.
StateVector sample_haar_state(int n_qubits, std::uint64_t seed);

enum class EnsembleKind { haar_state, goe, gue, gse, poisson_levels };
EnsembleKind parse_ensemble_kind(std::string_view name);
std::string_view to_string(EnsembleKind kind);

/// Ascending eigenvalues of a dim x dim matrix from the ensemble. GSE needs
/// an even dim and returns Kramers pairs (every level twice). poisson_levels
/// returns dim i.i.d. uniform levels. haar_state is not a matrix ensemble and
/// throws ArgumentError.
std::vector<double> sample_rmt_spectrum(EnsembleKind kind, int dim, std::uint64_t seed);

}  // namespace syklab
