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

#include "syklab/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "syklab/errors.hpp"

namespace syklab {

namespace {

using Index = Eigen::Index;

struct Block {
  std::vector<Index> basis;  // full-space indices of this block
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

void diagonalize(Block& b, const Eigen::MatrixXcd& dense, bool want_vectors) {
  const auto m = static_cast<Index>(b.basis.size());
  Eigen::MatrixXcd sub(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) sub(i, j) = dense(b.basis[static_cast<std::size_t>(i)],
                                                   b.basis[static_cast<std::size_t>(j)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      sub, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("full_spectrum: eigensolver failed");
  b.values = es.eigenvalues();
  if (want_vectors) b.vectors = es.eigenvectors();
}

Spectrum assemble(std::vector<Block>& blocks, Index dim, bool want_vectors, bool labelled) {
  struct Level {
    double value;
    int block;
    Index local;
  };
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(dim));
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    for (Index k = 0; k < blocks[static_cast<std::size_t>(b)].values.size(); ++k)
      levels.push_back({blocks[static_cast<std::size_t>(b)].values[k], b, k});
  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& b) { return a.value < b.value; });
  Spectrum s;
  s.eigenvalues.resize(dim);
  if (want_vectors) s.eigenvectors = Eigen::MatrixXcd::Zero(dim, dim);
  if (labelled) s.sectors.resize(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    const auto& l = levels[static_cast<std::size_t>(i)];
    const auto& blk = blocks[static_cast<std::size_t>(l.block)];
    s.eigenvalues[i] = l.value;
    if (labelled) s.sectors[static_cast<std::size_t>(i)] = l.block;
    if (want_vectors)
      for (std::size_t r = 0; r < blk.basis.size(); ++r)
        (*s.eigenvectors)(blk.basis[r], i) = blk.vectors(static_cast<Index>(r), l.local);
  }
  return s;
}

bool dense_preserves_parity(const Eigen::MatrixXcd& h) {
  for (Index c = 0; c < h.cols(); ++c)
    for (Index r = 0; r < h.rows(); ++r)
      if ((std::popcount(static_cast<std::uint64_t>(r ^ c)) & 1) && h(r, c) != cplx(0.0))
        return false;
  return true;
}

}  // namespace

Spectrum full_spectrum(const Eigen::MatrixXcd& h, bool want_vectors) {
  if (h.rows() != h.cols()) throw DimensionError("full_spectrum: matrix is not square");
  const Index dim = h.rows();
  if (dim == 0) throw ArgumentError("full_spectrum: empty matrix");
  const bool split = dim >= 2 && std::has_single_bit(static_cast<std::uint64_t>(dim)) &&
                     dense_preserves_parity(h);
  std::vector<Block> blocks(split ? 2 : 1);
  for (Index i = 0; i < dim; ++i) {
    const int b = split ? (std::popcount(static_cast<std::uint64_t>(i)) & 1) : 0;
    blocks[static_cast<std::size_t>(b)].basis.push_back(i);
  }
  for (auto& b : blocks) diagonalize(b, h, want_vectors);
  return assemble(blocks, dim, want_vectors, split);
}

Spectrum full_spectrum(const SparseHamiltonian& h, bool want_vectors,
                       const DenseOptions& options) {
  if (h.dim() > options.dense_limit)
    throw ResourceError(fmt::format("full_spectrum: dimension {} exceeds the dense limit {}; "
                                    "use ground_state() (iterative path)",
                                    h.dim(), options.dense_limit),
                        h.dim() * h.dim() * sizeof(cplx));
  return full_spectrum(h.to_dense(), want_vectors);
}

std::size_t select_index(const Spectrum& s, EigenstateKind kind) {
  if (s.size() == 0) throw ContractError("select_eigenstate: empty spectrum");
  const auto& ev = s.eigenvalues;
  if (kind == EigenstateKind::ground) {
    std::size_t best = 0;
    if (!s.sectors.empty()) {
      for (std::size_t i = 0; i < s.size() && ev[static_cast<Index>(i)] - ev[0] <= 1e-9; ++i) {
        if (s.sectors[i] < s.sectors[best]) best = i;
      }
    }
    return best;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(ev[static_cast<Index>(i)]) < std::abs(ev[static_cast<Index>(best)])) best = i;
  return best;
}

StateVector select_eigenstate(const Spectrum& s, EigenstateKind kind) {
  if (!s.eigenvectors) throw ContractError("select_eigenstate: spectrum has no eigenvectors");
  const auto i = static_cast<Index>(select_index(s, kind));
  return StateVector::normalized(s.eigenvectors->col(i));
}

std::vector<double> collapse_degenerate(std::span<const double> ascending, double tol) {
  std::vector<double> out;
  for (double v : ascending)
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  return out;
}

double spectral_gap(const Spectrum& s, double degenerate_tol) {
  if (s.size() < 2) throw ContractError("spectral_gap: need at least two levels");
  const auto levels = collapse_degenerate(
      std::span<const double>(s.eigenvalues.data(), s.size()), degenerate_tol);
  if (levels.size() < 2) throw ContractError("spectral_gap: only one distinct level");
  return levels[1] - levels[0];
}

std::vector<std::vector<double>> statistics_levels(const Spectrum& s, double degenerate_tol) {
  std::vector<std::vector<double>> raw(s.sectors.empty() ? 1 : 2);
  for (std::size_t i = 0; i < s.size(); ++i)
    raw[s.sectors.empty() ? 0 : static_cast<std::size_t>(s.sectors[i])].push_back(
        s.eigenvalues[static_cast<Index>(i)]);
  std::vector<std::vector<double>> out;
  for (const auto& r : raw)
    if (!r.empty()) out.push_back(collapse_degenerate(r, degenerate_tol));
  return out;
}

std::vector<double> stripped_levels(const std::vector<Spectrum>& spectra) {
  std::vector<double> pooled;
  for (const auto& s : spectra)
    for (std::size_t i = 0; i < s.size(); i += 2) pooled.push_back(s.eigenvalues[static_cast<Index>(i)]);
  return pooled;
}

HistogramPDF dos_histogram(const std::vector<Spectrum>& spectra, std::size_t bins) {
  if (spectra.empty()) throw ArgumentError("dos_histogram: no spectra");
  const auto pooled = stripped_levels(spectra);
  if (pooled.empty()) throw ArgumentError("dos_histogram: spectra are empty");
  const auto [lo, hi] = std::minmax_element(pooled.begin(), pooled.end());
  double a = *lo, b = *hi;
  if (b - a <= 0.0) {
    a -= 0.5;
    b += 0.5;
  }
  return make_histogram(pooled, bins, a, b);
}

Eigenpair lowest_eigenpair(const SparseHamiltonian& h, int sector, const LanczosOptions& options) {
  const auto dim = static_cast<Index>(h.dim());
  if (dim == 0) throw ArgumentError("lowest_eigenpair: empty matrix");
  if (sector != -1 && sector != 0 && sector != 1)
    throw ArgumentError("lowest_eigenpair: sector must be -1, 0 or 1");
  auto in_sector = [sector](Index i) {
    return sector < 0 || (std::popcount(static_cast<std::uint64_t>(i)) & 1) == sector;
  };
  auto project = [&](Eigen::VectorXcd& v) {
    if (sector < 0) return;
    for (Index i = 0; i < dim; ++i)
      if (!in_sector(i)) v[i] = 0.0;
  };

  Index sector_dim = 0;
  for (Index i = 0; i < dim; ++i) sector_dim += in_sector(i);
  if (sector_dim == 0) throw ArgumentError("lowest_eigenpair: empty sector");

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = cplx(normal(rng), normal(rng));
  project(v);
  v.normalize();

  const double scale = std::max(h.norm_bound(), 1e-300);
  const Index m = std::min<Index>(options.krylov_dim, sector_dim);
  Eigenpair best;
  Eigen::MatrixXcd basis(dim, m);
  Eigen::VectorXcd w(dim);
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    basis.col(0) = v;
    Index k = 0;
    for (; k < m; ++k) {
      h.multiply(basis.col(k).data(), w.data());
      ++best.matvecs;
      const double a = basis.col(k).dot(w).real();
      alpha.push_back(a);
      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass)
        w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
      project(w);
      const double b = w.norm();
      if (k + 1 == m || b <= 1e-14 * scale) {
        ++k;
        break;
      }
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd off(std::max<Index>(k - 1, 0));
    for (Index i = 0; i + 1 < k; ++i) off[i] = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()[0];
    Eigen::VectorXcd ritz = basis.leftCols(k) * tri.eigenvectors().col(0).cast<cplx>();
    ritz.normalize();
    Eigen::VectorXcd hr = h * ritz;
    ++best.matvecs;
    const double residual = (hr - theta * ritz).norm();
    best.value = theta;
    best.vector = ritz;
    if (residual <= options.tol * scale || k >= sector_dim) {
      best.converged = true;
      break;
    }
    v = ritz;
  }
  best.sector = sector;
  return best;
}

Eigenpair ground_state(const SparseHamiltonian& h, const LanczosOptions& options) {
  const bool split = h.dim() >= 2 && std::has_single_bit(h.dim()) && h.preserves_parity();
  if (!split) return lowest_eigenpair(h, -1, options);
  Eigenpair even = lowest_eigenpair(h, 0, options);
  Eigenpair odd = lowest_eigenpair(h, 1, options);
  odd.matvecs += even.matvecs;
  even.matvecs = odd.matvecs;
  return odd.value < even.value - 1e-9 ? odd : even;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s, bool header) {
  if (header) out << "seed,N,g,index,eigenvalue\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << fmt::format("{},{},{},{},{:.17g}\n", s.meta.seed, s.meta.n_majorana, s.meta.g, i,
                       s.eigenvalues[static_cast<Index>(i)]);
}

}  // namespace syklab
