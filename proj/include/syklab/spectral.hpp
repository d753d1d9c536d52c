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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "syklab/ess.hpp"
#include "syklab/pauli.hpp"
#include "syklab/syk.hpp"

namespace syklab {

struct SpectrumMeta {
  std::uint64_t seed = 0;
  int n_majorana = 0;
  double g = 0.0;
};

/// Ascending eigenvalues, optionally with eigenvectors (one per column).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  std::optional<Eigen::MatrixXcd> eigenvectors;
  /// Fermion-parity sector (0 even, 1 odd) of each level when the matrix was
  /// block-diagonalized by parity; empty otherwise.
  std::vector<int> sectors;
  SpectrumMeta meta;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

struct DenseOptions {
  std::size_t dense_limit = std::size_t{1} << 13;
};

/// Complete eigensystem. Parity-preserving matrices of power-of-two dimension
/// are split into their two parity blocks first. Throws ResourceError above
/// the dense limit; use ground_state() there.
Spectrum full_spectrum(const SparseHamiltonian& h, bool want_vectors,
                       const DenseOptions& options = {});
Spectrum full_spectrum(const Eigen::MatrixXcd& h, bool want_vectors);

enum class EigenstateKind { ground, middle };

/// ground: lowest level; among levels within 1e-9 of it the even-parity one
/// (then the lower index). middle: level closest to E = 0, lower index on ties.
std::size_t select_index(const Spectrum& s, EigenstateKind kind);
StateVector select_eigenstate(const Spectrum& s, EigenstateKind kind);

/// Merges levels closer than `tol` (keeps the first of each run).
std::vector<double> collapse_degenerate(std::span<const double> ascending, double tol = 1e-9);

/// E_1 - E_0 between the two lowest distinct levels.
double spectral_gap(const Spectrum& s, double degenerate_tol = 1e-9);

/// Level sequences used for spacing statistics: one per parity sector when
/// known, each with degenerate levels collapsed.
std::vector<std::vector<double>> statistics_levels(const Spectrum& s, double degenerate_tol = 1e-9);

/// Histogram of every second eigenvalue pooled over spectra, on [min, max].
HistogramPDF dos_histogram(const std::vector<Spectrum>& spectra, std::size_t bins);

/// Every second eigenvalue of each spectrum, pooled.
std::vector<double> stripped_levels(const std::vector<Spectrum>& spectra);

struct LanczosOptions {
  int krylov_dim = 96;
  double tol = 1e-10;  // residual relative to the norm bound
  int max_restarts = 300;
  std::uint64_t seed = 1;
};

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXcd vector;
  bool converged = false;
  int matvecs = 0;
  int sector = -1;
};

/// Lowest eigenpair via restarted Lanczos with full reorthogonalization. With
/// sector = 0 or 1 the Krylov space is confined to that bit-parity sector.
Eigenpair lowest_eigenpair(const SparseHamiltonian& h, int sector = -1,
                           const LanczosOptions& options = {});

/// Ground state; runs both parity sectors of a parity-preserving matrix and
/// keeps the lower (even on a tie within 1e-9).
Eigenpair ground_state(const SparseHamiltonian& h, const LanczosOptions& options = {});

/// CSV rows "seed,N,g,index,eigenvalue"; header when requested.
void write_spectrum_csv(std::ostream& out, const Spectrum& s, bool header = true);

}  // namespace syklab
