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

#include "syklab/sre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "syklab/errors.hpp"

namespace syklab {

namespace {

// In-place unnormalized Walsh-Hadamard transform.
void fwht(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const cplx u = a[j], v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
}

// Calls fn(x, z, |<P_xz>|^2) for every Pauli string.
template <class Fn>
void for_each_pauli_weight(const StateVector& psi, Fn&& fn) {
  const std::size_t d = psi.dim();
  const auto& amps = psi.amplitudes();
  std::vector<cplx> phi(d);
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t b = 0; b < d; ++b)
      phi[b] = std::conj(amps[static_cast<Eigen::Index>(b ^ x)]) * amps[static_cast<Eigen::Index>(b)];
    fwht(phi);
    for (std::size_t z = 0; z < d; ++z) fn(x, z, std::norm(phi[z]));
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(SREMethod m) { return m == SREMethod::exact ? "exact" : "sampled"; }

std::vector<double> pauli_expectations_squared(const StateVector& psi) {
  const int n = psi.n_qubits();
  if (n > 13) throw ResourceError("pauli_expectations_squared: 4^n table too large", std::size_t{8} << (2 * n));
  std::vector<double> out(std::size_t{1} << (2 * n));
  for_each_pauli_weight(psi, [&](std::size_t x, std::size_t z, double w) { out[(x << n) | z] = w; });
  return out;
}

SREEstimate exact_sre(const StateVector& psi, double alpha, int exact_limit) {
  if (!(alpha > 0.0)) throw ArgumentError("exact_sre: alpha must be positive");
  const int n = psi.n_qubits();
  if (n > exact_limit)
    throw UnsupportedError("exact_sre: " + std::to_string(n) + " qubits exceeds the exact limit of " +
                           std::to_string(exact_limit) + "; use sampled_sre2 on an MPS");
  const double d = static_cast<double>(psi.dim());
  double acc = 0.0;
  if (alpha == 1.0) {
    // Shannon limit: H(Xi) - n with Xi = <P>^2 / d.
    for_each_pauli_weight(psi, [&](std::size_t, std::size_t, double w) {
      const double xi = w / d;
      if (xi > 1e-300) acc -= xi * std::log2(xi);
    });
    acc -= n;
  } else {
    for_each_pauli_weight(psi, [&](std::size_t, std::size_t, double w) { acc += std::pow(w, alpha); });
    acc = std::log2(acc / d) / (1.0 - alpha);
  }
  SREEstimate est;
  est.value = std::abs(acc) < 1e-12 ? 0.0 : acc;
  est.method = SREMethod::exact;
  est.n_samples = 0;
  return est;
}

std::vector<int> MPSState::bond_dims() const {
  std::vector<int> out;
  for (std::size_t j = 0; j + 1 < tensors.size(); ++j)
    out.push_back(static_cast<int>(tensors[j][0].cols()));
  return out;
}

double MPSState::norm() const { return to_vector().norm(); }

Eigen::VectorXcd MPSState::to_vector() const {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Ones(1, 1);
  for (const auto& site : tensors) {
    Eigen::MatrixXcd next(2 * v.rows(), site[0].cols());
    next.topRows(v.rows()) = v * site[0];
    next.bottomRows(v.rows()) = v * site[1];
    v = std::move(next);
  }
  return v.col(0);
}

MPSState mps_compress(const StateVector& psi, int chi_max, double cutoff) {
  if (chi_max < 1) throw ArgumentError("mps_compress: chi_max must be >= 1");
  if (cutoff < 0.0) throw ArgumentError("mps_compress: cutoff must be non-negative");
  const int n = psi.n_qubits();
  MPSState mps;
  mps.n_qubits = n;
  mps.chi_max = chi_max;
  mps.truncation_cutoff = cutoff;
  mps.tensors.resize(static_cast<std::size_t>(n));

  // rest holds the not-yet-decomposed tensor with memory layout a + chi*(s + 2*tail).
  Eigen::VectorXcd rest = psi.amplitudes();
  Eigen::Index chi = 1;
  for (int j = 0; j < n - 1; ++j) {
    const Eigen::Index rows = 2 * chi, cols = rest.size() / rows;
    Eigen::Map<const Eigen::MatrixXcd> m(rest.data(), rows, cols);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double total = s.squaredNorm();
    Eigen::Index keep = s.size();
    double discarded = 0.0;
    while (keep > 1) {
      const double w = s[keep - 1] * s[keep - 1];
      if (keep <= chi_max && discarded + w > cutoff * total) break;
      discarded += w;
      --keep;
    }
    const Eigen::MatrixXcd u = svd.matrixU().leftCols(keep);
    auto& site = mps.tensors[static_cast<std::size_t>(j)];
    for (int p = 0; p < 2; ++p) {
      site[static_cast<std::size_t>(p)].resize(chi, keep);
      for (Eigen::Index a = 0; a < chi; ++a) site[static_cast<std::size_t>(p)].row(a) = u.row(a + chi * p);
    }
    const Eigen::MatrixXcd sv = s.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
    rest = Eigen::Map<const Eigen::VectorXcd>(sv.data(), sv.size());
    chi = keep;
  }
  auto& last = mps.tensors.back();
  for (int p = 0; p < 2; ++p) {
    last[static_cast<std::size_t>(p)].resize(chi, 1);
    for (Eigen::Index a = 0; a < chi; ++a) last[static_cast<std::size_t>(p)](a, 0) = rest[a + chi * p];
  }

  // Right-canonicalize with LQ steps from the right.
  for (int j = n - 1; j >= 1; --j) {
    auto& site = mps.tensors[static_cast<std::size_t>(j)];
    const Eigen::Index cl = site[0].rows(), cr = site[0].cols();
    Eigen::MatrixXcd m(cl, 2 * cr);
    m << site[0], site[1];
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m.adjoint());
    const Eigen::Index k = std::min(cl, 2 * cr);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * cr, k);
    const Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXcd qa = q.adjoint();
    site[0] = qa.leftCols(cr);
    site[1] = qa.rightCols(cr);
    auto& prev = mps.tensors[static_cast<std::size_t>(j - 1)];
    prev[0] = prev[0] * r.adjoint();
    prev[1] = prev[1] * r.adjoint();
  }
  auto& first = mps.tensors.front();
  const double nrm = std::sqrt(first[0].squaredNorm() + first[1].squaredNorm());
  if (!(nrm > 0.0)) throw ContractError("mps_compress: compressed state vanished");
  first[0] /= nrm;
  first[1] /= nrm;
  mps.right_canonical = true;
  mps.fidelity = std::norm(mps.to_vector().dot(psi.amplitudes()));
  return mps;
}

std::vector<PauliSample> perfect_pauli_sample(const MPSState& mps, long long n_samples,
                                              std::uint64_t seed) {
  if (!mps.right_canonical) throw ContractError("perfect_pauli_sample: MPS is not right-canonical");
  if (mps.tensors.empty()) throw ContractError("perfect_pauli_sample: empty MPS");
  const auto& first = mps.tensors.front();
  if (std::abs(first[0].squaredNorm() + first[1].squaredNorm() - 1.0) > 1e-8)
    throw ContractError("perfect_pauli_sample: MPS is not normalized");
  if (n_samples < 0) throw ArgumentError("perfect_pauli_sample: negative sample count");

  const cplx I(0.0, 1.0);
  std::mt19937_64 rng(seed);
  std::vector<PauliSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  const int n = mps.n_qubits;
  for (long long t = 0; t < n_samples; ++t) {
    Eigen::MatrixXcd env = Eigen::MatrixXcd::Ones(1, 1);
    std::uint64_t xm = 0, zm = 0;
    for (int j = 0; j < n; ++j) {
      const auto& a = mps.tensors[static_cast<std::size_t>(j)];
      const Eigen::MatrixXcd l0 = env * a[0], l1 = env * a[1];
      const Eigen::MatrixXcd b00 = a[0].adjoint() * l0, b01 = a[0].adjoint() * l1;
      const Eigen::MatrixXcd b10 = a[1].adjoint() * l0, b11 = a[1].adjoint() * l1;
      // Letters I, X, Y, Z; sigma_y = [[0, -i], [i, 0]].
      std::array<Eigen::MatrixXcd, 4> cand{b00 + b11, b01 + b10, -I * b01 + I * b10, b00 - b11};
      std::array<double, 4> w{};
      double total = 0.0;
      for (int c = 0; c < 4; ++c) total += (w[static_cast<std::size_t>(c)] = cand[static_cast<std::size_t>(c)].squaredNorm());
      double u = uniform01(rng) * total;
      int pick = 3;
      for (int c = 0; c < 4; ++c) {
        if (u < w[static_cast<std::size_t>(c)]) { pick = c; break; }
        u -= w[static_cast<std::size_t>(c)];
      }
      while (w[static_cast<std::size_t>(pick)] == 0.0) --pick;  // rounding at the top end
      if (pick == 1 || pick == 2) xm |= std::uint64_t{1} << j;
      if (pick == 2 || pick == 3) zm |= std::uint64_t{1} << j;
      env = std::move(cand[static_cast<std::size_t>(pick)]);
    }
    out.push_back({PauliString(n, xm, zm, 0), env(0, 0).real()});
  }
  return out;
}

SREEstimate sampled_sre2(const MPSState& mps, long long n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw ArgumentError("sampled_sre2: need at least two samples");
  const auto samples = perfect_pauli_sample(mps, n_samples, seed);
  double mean = 0.0;
  for (const auto& s : samples) mean += s.expectation * s.expectation;
  mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (const auto& s : samples) {
    const double dv = s.expectation * s.expectation - mean;
    var += dv * dv;
  }
  var /= static_cast<double>(n_samples - 1);
  SREEstimate est;
  est.method = SREMethod::sampled;
  est.n_samples = n_samples;
  if (!(mean > 0.0)) {
    est.degenerate = true;
    est.value = std::numeric_limits<double>::infinity();
    est.std_error = std::numeric_limits<double>::infinity();
    return est;
  }
  est.value = -std::log2(mean);
  if (std::abs(est.value) < 1e-12) est.value = 0.0;
  est.std_error = std::sqrt(var / static_cast<double>(n_samples)) / (mean * std::numbers::ln2);
  return est;
}

SREReferenceKind parse_sre_reference_kind(std::string_view name) {
  for (auto k : {SREReferenceKind::haar, SREReferenceKind::golden, SREReferenceKind::gs_fit,
                 SREReferenceKind::ms_fit})
    if (to_string(k) == name) return k;
  throw ArgumentError("unknown SRE reference '" + std::string(name) + "'");
}

std::string_view to_string(SREReferenceKind kind) {
  switch (kind) {
    case SREReferenceKind::haar: return "haar";
    case SREReferenceKind::golden: return "golden";
    case SREReferenceKind::gs_fit: return "gs_fit";
    case SREReferenceKind::ms_fit: return "ms_fit";
  }
  return "unknown";
}

double sre_reference(SREReferenceKind kind, int n_qubits) {
  if (n_qubits < 1) throw ArgumentError("sre_reference: qubit count must be positive");
  const double n = n_qubits;
  switch (kind) {
    case SREReferenceKind::haar: return -2.0 + n;
    case SREReferenceKind::golden: return n * std::log2(1.5);
    case SREReferenceKind::gs_fit: return -2.4 + 0.95 * n;
    case SREReferenceKind::ms_fit: return -2.6 + 0.96 * n;
  }
  throw ArgumentError("sre_reference: unknown kind");
}

StateVector golden_product_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 26) throw ArgumentError("golden_product_state: bad qubit count");
  const double theta = std::acos(1.0 / std::sqrt(3.0));
  const cplx a0(std::cos(theta / 2), 0.0);
  const cplx a1 = std::polar(std::sin(theta / 2), std::numbers::pi / 4);
  const std::size_t d = std::size_t{1} << n_qubits;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    cplx amp = 1.0;
    for (int q = 0; q < n_qubits; ++q) amp *= ((i >> q) & 1) ? a1 : a0;
    v[static_cast<Eigen::Index>(i)] = amp;
  }
  return StateVector::normalized(std::move(v));
}

}  // namespace syklab
