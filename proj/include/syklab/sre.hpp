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

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "syklab/pauli.hpp"

namespace syklab {

enum class SREMethod { exact, sampled };
std::string_view to_string(SREMethod m);

struct SREEstimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for the exact path
  long long n_samples = 0;
  SREMethod method = SREMethod::exact;
  bool degenerate = false;  // sampled mean was not positive
};

/// Largest qubit count the exact path accepts unless told otherwise.
inline constexpr int kDefaultExactSreLimit = 8;

/// <P>^2 for every Hermitian Pauli string, indexed by (x << n) | z.
std::vector<double> pauli_expectations_squared(const StateVector& psi);

/// M_alpha = log2(d^-1 sum_P |<P>|^(2 alpha)) / (1 - alpha), by full enumeration.
/// alpha = 1 is taken as the limit. Throws UnsupportedError above exact_limit.
SREEstimate exact_sre(const StateVector& psi, double alpha, int exact_limit = kDefaultExactSreLimit);

/// Open-boundary MPS; site j carries qubit j (the least significant bit first).
/// tensors[j][s] is the chi_left x chi_right matrix for physical index s.
struct MPSState {
  int n_qubits = 0;
  int chi_max = 0;
  double truncation_cutoff = 0.0;
  bool right_canonical = false;
  double fidelity = 1.0;  // |<mps|input>|^2
  std::vector<std::array<Eigen::MatrixXcd, 2>> tensors;

  std::vector<int> bond_dims() const;  // n - 1 internal bonds
  double norm() const;
  Eigen::VectorXcd to_vector() const;
};

/// Left-to-right truncated SVD sweep, then right canonicalization and
/// normalization. Each cut discards at most a weight of cutoff.
MPSState mps_compress(const StateVector& psi, int chi_max, double cutoff = 1e-8);

struct PauliSample {
  PauliString string;  // Hermitian, phase 0
  double expectation = 0.0;
};

/// Independent draws from Xi_P = <P>^2 / d by qubit-by-qubit conditional
/// sampling. Needs a normalized right-canonical MPS (ContractError otherwise).
std::vector<PauliSample> perfect_pauli_sample(const MPSState& mps, long long n_samples,
                                              std::uint64_t seed);

/// -log2(mean <P>^2) over perfect samples with a delta-method error.
SREEstimate sampled_sre2(const MPSState& mps, long long n_samples = 10000, std::uint64_t seed = 1);

enum class SREReferenceKind { haar, golden, gs_fit, ms_fit };
SREReferenceKind parse_sre_reference_kind(std::string_view name);
std::string_view to_string(SREReferenceKind kind);

/// Closed-form references as functions of the qubit count n = N / 2.
double sre_reference(SREReferenceKind kind, int n_qubits);

/// The single-qubit golden state with Bloch vector (1,1,1)/sqrt 3, tensored n times.
StateVector golden_product_state(int n_qubits);

}  // namespace syklab
