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

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace syklab {

using cplx = std::complex<double>;

/// Largest register the 64-bit masks can address.
inline constexpr int kMaxQubits = 63;

/// Signed N-qubit Pauli operator i^phase * P_1 ... P_n in symplectic form.
///
/// Qubit 1 is bit 0 of both masks and the least-significant bit of basis
/// indices. A qubit with x=1,z=1 carries the letter Y (not XZ), so the phase
/// counts only the explicit prefactor and the operator is Hermitian exactly
/// when the phase is even.
class PauliString {
 public:
  PauliString() = default;
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase_exp = 0);

  static PauliString identity(int n_qubits) { return {n_qubits, 0, 0, 0}; }
  /// Single-qubit letter ('I','X','Y','Z') on 1-based qubit `qubit`.
  static PauliString single(int n_qubits, int qubit, char letter);
  /// Parses the canonical rendering, e.g. "+1 XZIY" or "-i ZZ". The leftmost
  /// letter is the highest qubit.
  static PauliString parse(const std::string& text);

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase_exp() const { return phase_; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  bool is_hermitian() const { return (phase_ & 1) == 0; }
  /// Number of non-identity letters.
  int weight() const;
  /// i^phase as a complex number.
  cplx prefactor() const;
  /// Same letters, phase reset to 0.
  PauliString unsigned_string() const { return {n_, x_, z_, 0}; }

  /// P|basis_index> = amplitude |new_index>.
  std::pair<std::uint64_t, cplx> apply_to_basis(std::uint64_t basis_index) const;

  /// "+1 XZIY": sign/phase token then letters from qubit n down to qubit 1.
  std::string to_string() const;

  bool operator==(const PauliString&) const = default;

 private:
  int n_ = 1;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// a * b with the accumulated i-power. Throws DimensionError on mismatch.
PauliString multiply(const PauliString& a, const PauliString& b);

/// True when a and b commute.
bool commutes(const PauliString& a, const PauliString& b);

/// Normalized state on n qubits (norm 1 within 1e-10).
class StateVector {
 public:
  StateVector() = default;
  /// Takes ownership of `amplitudes`; length must be 2^n. Throws
  /// ContractError if the norm deviates from 1 by more than 1e-10.
  explicit StateVector(Eigen::VectorXcd amplitudes);
  /// Normalizes before storing; throws ArgumentError on a zero vector.
  static StateVector normalized(Eigen::VectorXcd amplitudes);
  static StateVector basis(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

 private:
  int n_ = 0;
  Eigen::VectorXcd amps_;
};

/// <psi|P|psi> for Hermitian P in O(2^n) without building P.
double expectation(const PauliString& p, const StateVector& psi);

/// P|psi>.
Eigen::VectorXcd apply(const PauliString& p, const Eigen::VectorXcd& psi);

/// Dense 2^n x 2^n matrix of P. Intended for tests and small debug dumps.
Eigen::MatrixXcd to_dense(const PauliString& p);

/// Real-weighted sum of Pauli strings representing a Hermitian operator.
///
/// Construction absorbs each string's phase into its coefficient and merges
/// duplicates, so stored strings always have phase 0 and are distinct.
class PauliSum {
 public:
  struct Term {
    double coefficient;
    PauliString string;
  };

  explicit PauliSum(int n_qubits) : n_(n_qubits) {}

  /// Complex-weighted input; each c * i^phase must be real within
  /// `imag_tol` (relative to max |c|), otherwise ContractError.
  static PauliSum from_complex(int n_qubits,
                               const std::vector<std::pair<cplx, PauliString>>& terms,
                               double imag_tol = 1e-12);

  /// Adds c * p; p must be Hermitian (phase 0 or 2).
  void add(double coefficient, const PauliString& p);

  int n_qubits() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Returns a copy with every coefficient multiplied by s.
  PauliSum scaled(double s) const;

  Eigen::MatrixXcd to_dense() const;

 private:
  int n_;
  std::vector<Term> terms_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> index_;
  void insert(double coefficient, std::uint64_t x, std::uint64_t z);
};

/// a + b with duplicate strings merged.
PauliSum operator+(const PauliSum& a, const PauliSum& b);

}  // namespace syklab
