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
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "syklab/pauli.hpp"

namespace syklab {

/// Disorder ensemble member: N Majoranas, q-body couplings of scale J.
struct DisorderSpec {
  int n_majorana = 8;
  int q = 4;
  double coupling_scale = 1.0;
  std::uint64_t seed = 0;

  int n_qubits() const { return n_majorana / 2; }
  /// Target coupling variance (q-1)! J / N^(q-1).
  double coupling_variance() const;
  /// Throws ArgumentError unless N is even, q in {2,4} and N >= q.
  void validate() const;
};

/// Jordan-Wigner image of Majorana i (1-based) among N:
/// chi_{2k-1} = Z_1..Z_{k-1} X_k, chi_{2k} = Z_1..Z_{k-1} Y_k, chi_i^2 = 1.
PauliString jordan_wigner(int majorana_index, int n_majorana);

struct Coupling {
  std::array<int, 4> indices{};  // 1-based, strictly increasing; first q used
  double value = 0.0;
};

/// One disorder draw: a coupling for every i_1 < ... < i_q, in lexicographic
/// order of the index tuple.
struct CouplingTensor {
  DisorderSpec spec;
  std::vector<Coupling> values;

  std::size_t size() const { return values.size(); }
};

/// Deterministic N(0, 1) draw keyed by (seed, stream, tuple). The same key
/// always yields the same number regardless of call order.
double keyed_normal(std::uint64_t seed, std::uint64_t stream,
                    std::span<const int> tuple);

/// I.i.d. Gaussian couplings with mean 0 and variance (q-1)! J / N^(q-1).
CouplingTensor sample_couplings(const DisorderSpec& spec);

/// q=2: i sum J_ij chi_i chi_j;  q=4: -sum J_ijkl chi_i chi_j chi_k chi_l.
PauliSum build_syk(const CouplingTensor& couplings);

/// (1-g) h4 + g h2 for g in [0, 1].
PauliSum build_interpolated(const PauliSum& h4, const PauliSum& h2, double g);

/// Hermitian matrix in compressed-row form, dimension 2^n.
class SparseHamiltonian {
 public:
  SparseHamiltonian() = default;
  SparseHamiltonian(std::size_t dim, std::vector<std::size_t> row_ptr,
                    std::vector<std::uint32_t> cols, std::vector<cplx> values);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return vals_.size(); }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint32_t>& cols() const { return cols_; }
  const std::vector<cplx>& values() const { return vals_; }

  /// y = H x
  void multiply(const cplx* x, cplx* y) const;
  Eigen::VectorXcd operator*(const Eigen::VectorXcd& x) const;

  cplx entry(std::size_t row, std::size_t col) const;
  Eigen::MatrixXcd to_dense() const;
  double trace() const;
  /// Max absolute row sum; an upper bound on the spectral norm.
  double norm_bound() const;
  bool is_hermitian(double tol = 1e-12) const;
  /// True when every nonzero connects basis states of equal bit parity.
  bool preserves_parity() const;
  /// Order-sensitive FNV-1a digest of the stored structure and values.
  std::uint64_t fingerprint() const;

  std::size_t bytes() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<cplx> vals_;
};

/// Bytes assemble_sparse would allocate for h.
std::size_t estimate_sparse_bytes(const PauliSum& h);

/// Default cap used when none is given (4 GiB).
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{4} << 30;

/// Assembles h; throws ResourceError if the estimate exceeds the budget.
SparseHamiltonian assemble_sparse(const PauliSum& h,
                                  std::size_t memory_budget = kDefaultMemoryBudget);

/// Header of the binary Hamiltonian dump. q is 4 or 2 for a pure model and 0
/// for an interpolated one.
struct HamiltonianDumpHeader {
  std::uint64_t seed = 0;
  std::uint32_t n_majorana = 0;
  std::uint32_t q = 0;
  double g = 0.0;
};

/// Little-endian layout:
///   char[4] "SYKH", u32 version (=1), u64 seed, u32 N, u32 q, f64 g,
///   u64 dim, u64 nnz, then nnz records of {u64 row, u64 col, f64 re, f64 im}
///   in row-major order.
void write_hamiltonian_dump(std::ostream& out, const HamiltonianDumpHeader& header,
                            const SparseHamiltonian& h);
std::pair<HamiltonianDumpHeader, SparseHamiltonian> read_hamiltonian_dump(std::istream& in);

}  // namespace syklab
