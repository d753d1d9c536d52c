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
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "syklab/pauli.hpp"

namespace syklab {

/// Subset A of the qubits {1..n}; the complement is traced out.
struct Bipartition {
  int n_qubits = 0;
  std::vector<int> subsystem;  // sorted, 1-based

  int size() const { return static_cast<int>(subsystem.size()); }
  std::uint64_t mask() const;
  /// Throws ArgumentError unless 1 <= |A| <= n-1 and A is a sorted subset.
  void validate() const;
};

/// `count` distinct subsets of size R drawn uniformly without replacement,
/// returned in lexicographic order. Deterministic per seed.
std::vector<Bipartition> sample_bipartitions(int n_qubits, int subsystem_size, int count,
                                             std::uint64_t seed);
/// Same with R = f * n, which must be integral.
std::vector<Bipartition> sample_bipartitions(int n_qubits, double f, int count,
                                             std::uint64_t seed);

/// Subsystem size used for "half-system" cuts: floor(n / 2).
inline int half_subsystem(int n_qubits) { return n_qubits / 2; }

/// Eigenvalues of rho_A in descending order, clamped at zero and renormalized.
struct EntanglementSpectrum {
  std::vector<double> eigenvalues;  // length 2^R
  int n_qubits = 0;
  int subsystem_size = 0;
};

EntanglementSpectrum partial_trace(const StateVector& psi, const Bipartition& b);

/// Spectrum of rho_A split by the parity of the subsystem's Z string. A state
/// of definite total parity makes rho_A block diagonal in that parity, and
/// level statistics must not mix the blocks. Returns the two blocks (even
/// first), each ascending, or the whole spectrum as one ascending block when
/// psi has no definite parity.
std::vector<std::vector<double>> parity_resolved_spectra(const StateVector& psi, const Bipartition& b);

/// S_alpha with the natural logarithm; alpha = 1 gives -sum l ln l.
double renyi_entropy(const EntanglementSpectrum& spec, double alpha);

/// d S~_alpha / d alpha at alpha = 1, i.e. -Var(ln rho): never positive.
double capacity_of_entanglement(const EntanglementSpectrum& spec);

/// 2 (S_2 - S_3).
double log_antiflatness(const EntanglementSpectrum& spec);

/// Points (x_k, eta_k) with x_k = sqrt(lambda_k d) / 2, eta_k = k / d,
/// d = 2^R, eigenvalues descending. Only for half-system cuts.
std::vector<std::pair<double, double>> normalized_rdm_curve(const EntanglementSpectrum& spec);

/// |(s1 - reference) / reference|.
double relative_gap(double s1, double reference);

// --- Haar references -------------------------------------------------------

/// Marchenko-Pastur survival function 1 - (2/pi)(x sqrt(1-x^2) + asin x).
double marchenko_pastur_eta(double x);

/// Discrete distributions on `bins` equal bins of x in [0, 1]: the mass the
/// Marchenko-Pastur law puts in each bin.
std::vector<double> marchenko_pastur_bin_probabilities(int bins);

/// Histogram masses of the x_k of a normalized curve (x > 1 goes in the last bin).
std::vector<double> curve_bin_probabilities(const std::vector<std::pair<double, double>>& curve,
                                            int bins);

enum class HaarReferenceKind { page_entropy, renyi_page, mp_curve, capacity, log_antiflatness, sre_scaling };

HaarReferenceKind parse_haar_reference_kind(std::string_view name);
std::string_view to_string(HaarReferenceKind kind);

struct HaarReference {
  HaarReferenceKind kind = HaarReferenceKind::capacity;
  int n_qubits = 0;       // renyi_page, sre_scaling
  int subsystem_size = 0; // renyi_page
  int alpha = 2;          // renyi_page (integer >= 2)
  double f = 0.5;         // page_entropy
  double x = 0.0;         // mp_curve
};

/// page_entropy: 2 S_1 / (n ln 2) = 2 min(f, 1-f) at leading order.
/// renyi_page: average S_alpha of Haar states via Narayana numbers.
/// mp_curve: eta(x). capacity: 11/4 - pi^2/3. log_antiflatness: ln(5/4).
/// sre_scaling: -2 + n.
double haar_reference(const HaarReference& ref);

/// Finite-size average entanglement entropy of Haar states on n qubits cut
/// at R: sum_{k=d_B+1}^{d_A d_B} 1/k - (d_A - 1) / (2 d_B), d_A <= d_B.
double page_entropy_exact(int n_qubits, int subsystem_size);

// --- Free-fermion (SYK-2) references ---------------------------------------

enum class Syk2ReferenceKind { mean_entropy, log_antiflatness };

/// mean_entropy: K(f) R ln 2 with K(f) = 1 - (1 + (1-f)/f ln(1-f)) / ln 2.
/// log_antiflatness: 2R(1-f) sum_n (1/n)(2^-n - 3^n/(2 4^n)) 2F1(1/2, 1-n; 2; 4f(1-f)).
double syk2_reference(Syk2ReferenceKind kind, int subsystem_size, double f);

/// Terminating 2F1(a, -m; c; z) for integer m >= 0, Kahan-summed.
double hypergeometric_2f1_terminating(double a, int m, double c, double z);

}  // namespace syklab
