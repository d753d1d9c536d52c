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

#include "syklab/syk.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

#include "syklab/errors.hpp"

namespace syklab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform in (0, 1].
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double DisorderSpec::coupling_variance() const {
  return factorial(q - 1) * coupling_scale / std::pow(static_cast<double>(n_majorana), q - 1);
}

void DisorderSpec::validate() const {
  if (n_majorana < 2 || n_majorana % 2 != 0)
    throw ArgumentError("DisorderSpec: N must be even and positive");
  if (q != 2 && q != 4) throw UnsupportedError("DisorderSpec: q must be 2 or 4");
  if (n_majorana < q) throw ArgumentError("DisorderSpec: N must be at least q");
  if (n_majorana / 2 > kMaxQubits) throw ArgumentError("DisorderSpec: N too large");
  if (!(coupling_scale > 0.0)) throw ArgumentError("DisorderSpec: J must be positive");
}

PauliString jordan_wigner(int majorana_index, int n_majorana) {
  if (n_majorana < 2 || n_majorana % 2 != 0)
    throw ArgumentError("jordan_wigner: N must be even and positive");
  if (majorana_index < 1 || majorana_index > n_majorana)
    throw ArgumentError("jordan_wigner: Majorana index out of range");
  const int n = n_majorana / 2;
  const int k = (majorana_index + 1) / 2;  // 1-based qubit
  const std::uint64_t site = std::uint64_t{1} << (k - 1);
  const std::uint64_t tail = site - 1;
  const bool is_y = majorana_index % 2 == 0;
  return {n, site, tail | (is_y ? site : 0), 0};
}

double keyed_normal(std::uint64_t seed, std::uint64_t stream, std::span<const int> tuple) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(stream));
  for (int i : tuple) h = splitmix64(h ^ static_cast<std::uint64_t>(i));
  const double u1 = to_unit(splitmix64(h ^ 0x5555555555555555ull));
  const double u2 = to_unit(splitmix64(h ^ 0xAAAAAAAAAAAAAAAAull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CouplingTensor sample_couplings(const DisorderSpec& spec) {
  spec.validate();
  CouplingTensor out{spec, {}};
  const double sigma = std::sqrt(spec.coupling_variance());
  const int n = spec.n_majorana, q = spec.q;
  // Stream id separates the SYK-2 and SYK-4 draws of one seed and N.
  const std::uint64_t stream = (static_cast<std::uint64_t>(q) << 32) |
                               static_cast<std::uint64_t>(n);
  std::array<int, 4> idx{};
  for (int i = 0; i < q; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    Coupling c;
    c.indices = idx;
    c.value = sigma * keyed_normal(spec.seed, stream,
                                   std::span<const int>(idx.data(), static_cast<std::size_t>(q)));
    out.values.push_back(c);
    // Next combination in lexicographic order.
    int pos = q - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - q + pos + 1) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < q; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

PauliSum build_syk(const CouplingTensor& couplings) {
  const auto& spec = couplings.spec;
  if (spec.q != 2 && spec.q != 4) throw UnsupportedError("build_syk: q must be 2 or 4");
  spec.validate();
  const int n = spec.n_majorana;
  std::vector<PauliString> chi;
  chi.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) chi.push_back(jordan_wigner(i, n));

  // i^{q/2} for q=2, and the explicit minus sign for q=4.
  const cplx prefactor = spec.q == 2 ? cplx(0, 1) : cplx(-1, 0);
  std::vector<std::pair<cplx, PauliString>> terms;
  terms.reserve(couplings.size());
  for (const auto& c : couplings.values) {
    PauliString prod = chi[static_cast<std::size_t>(c.indices[0] - 1)];
    for (int k = 1; k < spec.q; ++k)
      prod = multiply(prod, chi[static_cast<std::size_t>(c.indices[static_cast<std::size_t>(k)] - 1)]);
    terms.emplace_back(prefactor * c.value, prod);
  }
  return PauliSum::from_complex(spec.n_qubits(), terms);
}

PauliSum build_interpolated(const PauliSum& h4, const PauliSum& h2, double g) {
  if (!(g >= 0.0 && g <= 1.0)) throw ArgumentError("build_interpolated: g must lie in [0, 1]");
  if (h4.n_qubits() != h2.n_qubits())
    throw DimensionError("build_interpolated: qubit counts differ");
  PauliSum out(h4.n_qubits());
  for (const auto& t : h4.terms()) out.add((1.0 - g) * t.coefficient, t.string);
  for (const auto& t : h2.terms()) out.add(g * t.coefficient, t.string);
  return out;
}

SparseHamiltonian::SparseHamiltonian(std::size_t dim, std::vector<std::size_t> row_ptr,
                                     std::vector<std::uint32_t> cols,
                                     std::vector<cplx> values)
    : dim_(dim), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(values)) {
  if (row_ptr_.size() != dim_ + 1 || row_ptr_.back() != vals_.size() ||
      cols_.size() != vals_.size())
    throw DimensionError("SparseHamiltonian: inconsistent CSR arrays");
}

void SparseHamiltonian::multiply(const cplx* x, cplx* y) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    cplx acc = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += vals_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

Eigen::VectorXcd SparseHamiltonian::operator*(const Eigen::VectorXcd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_)
    throw DimensionError("SparseHamiltonian: vector length mismatch");
  Eigen::VectorXcd y(x.size());
  multiply(x.data(), y.data());
  return y;
}

cplx SparseHamiltonian::entry(std::size_t row, std::size_t col) const {
  for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (cols_[k] == col) return vals_[k];
  return 0.0;
}

Eigen::MatrixXcd SparseHamiltonian::to_dense() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) += vals_[k];
  return m;
}

double SparseHamiltonian::trace() const {
  double t = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) t += entry(r, r).real();
  return t;
}

double SparseHamiltonian::norm_bound() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(vals_[k]);
    best = std::max(best, s);
  }
  return best;
}

bool SparseHamiltonian::is_hermitian(double tol) const {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (std::abs(vals_[k] - std::conj(entry(cols_[k], r))) > tol) return false;
  return true;
}

bool SparseHamiltonian::preserves_parity() const {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (vals_[k] != cplx(0.0) && (std::popcount(r ^ cols_[k]) & 1)) return false;
  return true;
}

std::uint64_t SparseHamiltonian::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ull;
    }
  };
  mix(&dim_, sizeof dim_);
  mix(row_ptr_.data(), row_ptr_.size() * sizeof(std::size_t));
  mix(cols_.data(), cols_.size() * sizeof(std::uint32_t));
  mix(vals_.data(), vals_.size() * sizeof(cplx));
  return h;
}

std::size_t SparseHamiltonian::bytes() const {
  return row_ptr_.size() * sizeof(std::size_t) + cols_.size() * sizeof(std::uint32_t) +
         vals_.size() * sizeof(cplx);
}

namespace {

std::map<std::uint64_t, std::vector<std::pair<cplx, std::uint64_t>>> group_by_x(const PauliSum& h) {
  std::map<std::uint64_t, std::vector<std::pair<cplx, std::uint64_t>>> groups;
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : h.terms()) {
    const auto& s = t.string;
    const int k = (s.phase_exp() + std::popcount(s.x_mask() & s.z_mask())) & 3;
    groups[s.x_mask()].emplace_back(t.coefficient * kIPow[k], s.z_mask());
  }
  return groups;
}

}  // namespace

std::size_t estimate_sparse_bytes(const PauliSum& h) {
  if (h.n_qubits() > 32) return std::numeric_limits<std::size_t>::max();
  std::vector<std::uint64_t> xs;
  xs.reserve(h.size());
  for (const auto& t : h.terms()) xs.push_back(t.string.x_mask());
  std::sort(xs.begin(), xs.end());
  const auto groups = static_cast<std::size_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
  const std::size_t dim = std::size_t{1} << h.n_qubits();
  return (dim + 1) * sizeof(std::size_t) + dim * groups * (sizeof(cplx) + sizeof(std::uint32_t));
}

SparseHamiltonian assemble_sparse(const PauliSum& h, std::size_t memory_budget) {
  const std::size_t need = estimate_sparse_bytes(h);
  if (need > memory_budget || h.n_qubits() > 31)
    throw ResourceError("assemble_sparse: needs " + std::to_string(need) +
                            " bytes, budget is " + std::to_string(memory_budget),
                        need);
  const std::size_t dim = std::size_t{1} << h.n_qubits();
  const auto groups = group_by_x(h);
  std::vector<std::size_t> row_ptr(dim + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<cplx> vals;
  cols.reserve(dim * groups.size());
  vals.reserve(dim * groups.size());
  std::vector<std::pair<std::uint32_t, cplx>> row;
  row.reserve(groups.size());
  for (std::size_t r = 0; r < dim; ++r) {
    row.clear();
    for (const auto& [x, terms] : groups) {
      // <r| c X^x Z^z |col> with col = r ^ x: phase (-1)^{|z & col|}.
      const std::uint64_t col = r ^ x;
      cplx acc = 0.0;
      for (const auto& [w, z] : terms) acc += (std::popcount(z & col) & 1) ? -w : w;
      row.emplace_back(static_cast<std::uint32_t>(col), acc);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [c, v] : row) {
      cols.push_back(c);
      vals.push_back(v);
    }
    row_ptr[r + 1] = vals.size();
  }
  return {dim, std::move(row_ptr), std::move(cols), std::move(vals)};
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little,
                "dump writer assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw ArgumentError("read_hamiltonian_dump: truncated stream");
  return v;
}

}  // namespace

void write_hamiltonian_dump(std::ostream& out, const HamiltonianDumpHeader& header,
                            const SparseHamiltonian& h) {
  out.write("SYKH", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint64_t>(out, header.seed);
  put<std::uint32_t>(out, header.n_majorana);
  put<std::uint32_t>(out, header.q);
  put<double>(out, header.g);
  put<std::uint64_t>(out, h.dim());
  put<std::uint64_t>(out, h.nnz());
  for (std::size_t r = 0; r < h.dim(); ++r) {
    for (std::size_t k = h.row_ptr()[r]; k < h.row_ptr()[r + 1]; ++k) {
      put<std::uint64_t>(out, r);
      put<std::uint64_t>(out, h.cols()[k]);
      put<double>(out, h.values()[k].real());
      put<double>(out, h.values()[k].imag());
    }
  }
}

std::pair<HamiltonianDumpHeader, SparseHamiltonian> read_hamiltonian_dump(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "SYKH")
    throw ArgumentError("read_hamiltonian_dump: bad magic");
  if (get<std::uint32_t>(in) != 1) throw UnsupportedError("read_hamiltonian_dump: version");
  HamiltonianDumpHeader hdr;
  hdr.seed = get<std::uint64_t>(in);
  hdr.n_majorana = get<std::uint32_t>(in);
  hdr.q = get<std::uint32_t>(in);
  hdr.g = get<double>(in);
  const auto dim = static_cast<std::size_t>(get<std::uint64_t>(in));
  const auto nnz = static_cast<std::size_t>(get<std::uint64_t>(in));
  std::vector<std::size_t> row_ptr(dim + 1, 0);
  std::vector<std::uint32_t> cols(nnz);
  std::vector<cplx> vals(nnz);
  std::size_t prev_row = 0;
  for (std::size_t k = 0; k < nnz; ++k) {
    const auto r = static_cast<std::size_t>(get<std::uint64_t>(in));
    const auto c = get<std::uint64_t>(in);
    const double re = get<double>(in), im = get<double>(in);
    if (r >= dim || c >= dim || r < prev_row)
      throw ArgumentError("read_hamiltonian_dump: records out of order or range");
    prev_row = r;
    ++row_ptr[r + 1];
    cols[k] = static_cast<std::uint32_t>(c);
    vals[k] = {re, im};
  }
  for (std::size_t r = 0; r < dim; ++r) row_ptr[r + 1] += row_ptr[r];
  return {hdr, SparseHamiltonian(dim, std::move(row_ptr), std::move(cols), std::move(vals))};
}

}  // namespace syklab
