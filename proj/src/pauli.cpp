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

#include "syklab/pauli.hpp"

#include <bit>
#include <cmath>

#include "syklab/errors.hpp"

namespace syklab {

namespace {

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

int popcount(std::uint64_t v) { return std::popcount(v); }

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

PauliString::PauliString(int n_qubits, std::uint64_t x_mask,
                         std::uint64_t z_mask, int phase_exp)
    : n_(n_qubits), x_(x_mask), z_(z_mask), phase_(((phase_exp % 4) + 4) % 4) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw ArgumentError("PauliString: qubit count out of range");
  if ((x_mask | z_mask) & ~low_mask(n_qubits))
    throw ArgumentError("PauliString: mask exceeds qubit count");
}

PauliString PauliString::single(int n_qubits, int qubit, char letter) {
  if (qubit < 1 || qubit > n_qubits)
    throw ArgumentError("PauliString::single: qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (qubit - 1);
  switch (letter) {
    case 'I': return {n_qubits, 0, 0};
    case 'X': return {n_qubits, bit, 0};
    case 'Y': return {n_qubits, bit, bit};
    case 'Z': return {n_qubits, 0, bit};
    default: throw ArgumentError("PauliString::single: unknown letter");
  }
}

PauliString PauliString::parse(const std::string& text) {
  const auto space = text.find(' ');
  if (space == std::string::npos)
    throw ArgumentError("PauliString::parse: expected '<phase> <letters>'");
  const std::string sign = text.substr(0, space);
  const std::string letters = text.substr(space + 1);
  int phase;
  if (sign == "+1") phase = 0;
  else if (sign == "+i") phase = 1;
  else if (sign == "-1") phase = 2;
  else if (sign == "-i") phase = 3;
  else throw ArgumentError("PauliString::parse: bad phase token '" + sign + "'");
  const int n = static_cast<int>(letters.size());
  if (n < 1 || n > kMaxQubits) throw ArgumentError("PauliString::parse: bad length");
  std::uint64_t x = 0, z = 0;
  for (int k = 0; k < n; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - k);
    switch (letters[static_cast<std::size_t>(k)]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default: throw ArgumentError("PauliString::parse: bad letter");
    }
  }
  return {n, x, z, phase};
}

int PauliString::weight() const { return popcount(x_ | z_); }

cplx PauliString::prefactor() const { return kIPow[phase_]; }

std::pair<std::uint64_t, cplx> PauliString::apply_to_basis(
    std::uint64_t basis_index) const {
  // Y = iXZ per qubit, so the letter product is i^{|x&z|} X^x Z^z.
  int k = phase_ + popcount(x_ & z_) + 2 * (popcount(z_ & basis_index) & 1);
  return {basis_index ^ x_, kIPow[k & 3]};
}

std::string PauliString::to_string() const {
  static const char* kPhase[4] = {"+1", "+i", "-1", "-i"};
  std::string out = kPhase[phase_];
  out += ' ';
  for (int q = n_; q >= 1; --q) {
    const std::uint64_t bit = std::uint64_t{1} << (q - 1);
    const bool x = x_ & bit, z = z_ & bit;
    out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return out;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw DimensionError("multiply: qubit counts differ");
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  // Convert both to X^x Z^z form, commute Z^{z_a} past X^{x_b}, convert back.
  const int k = a.phase_exp() + b.phase_exp() + popcount(a.x_mask() & a.z_mask()) +
                popcount(b.x_mask() & b.z_mask()) +
                2 * popcount(a.z_mask() & b.x_mask()) - popcount(x & z);
  return {a.n_qubits(), x, z, ((k % 4) + 4) % 4};
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw DimensionError("commutes: qubit counts differ");
  return ((popcount(a.x_mask() & b.z_mask()) + popcount(a.z_mask() & b.x_mask())) & 1) == 0;
}

StateVector::StateVector(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
  const auto d = static_cast<std::uint64_t>(amps_.size());
  if (d < 2 || !std::has_single_bit(d))
    throw DimensionError("StateVector: length must be a power of two >= 2");
  n_ = std::countr_zero(d);
  if (std::abs(amps_.norm() - 1.0) > 1e-10)
    throw ContractError("StateVector: amplitudes are not normalized");
}

StateVector StateVector::normalized(Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ArgumentError("StateVector::normalized: zero vector");
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1 || n_qubits > 30) throw ArgumentError("StateVector::basis: bad size");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  if (index >= static_cast<std::uint64_t>(v.size()))
    throw ArgumentError("StateVector::basis: index out of range");
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

double expectation(const PauliString& p, const StateVector& psi) {
  if (p.n_qubits() != psi.n_qubits())
    throw DimensionError("expectation: qubit counts differ");
  if (!p.is_hermitian()) throw ContractError("expectation: Pauli string is not Hermitian");
  const auto& v = psi.amplitudes();
  cplx acc = 0.0;
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    const auto [to, amp] = p.apply_to_basis(static_cast<std::uint64_t>(b));
    acc += std::conj(v[static_cast<Eigen::Index>(to)]) * amp * v[b];
  }
  return acc.real();
}

Eigen::VectorXcd apply(const PauliString& p, const Eigen::VectorXcd& psi) {
  if ((Eigen::Index{1} << p.n_qubits()) != psi.size())
    throw DimensionError("apply: vector length does not match qubit count");
  Eigen::VectorXcd out(psi.size());
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    const auto [to, amp] = p.apply_to_basis(static_cast<std::uint64_t>(b));
    out[static_cast<Eigen::Index>(to)] = amp * psi[b];
  }
  return out;
}

Eigen::MatrixXcd to_dense(const PauliString& p) {
  if (p.n_qubits() > 14) throw ArgumentError("to_dense: register too large");
  const Eigen::Index d = Eigen::Index{1} << p.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    const auto [to, amp] = p.apply_to_basis(static_cast<std::uint64_t>(b));
    m(static_cast<Eigen::Index>(to), b) = amp;
  }
  return m;
}

PauliSum PauliSum::from_complex(int n_qubits,
                                const std::vector<std::pair<cplx, PauliString>>& terms,
                                double imag_tol) {
  double scale = 0.0;
  for (const auto& [c, p] : terms) scale = std::max(scale, std::abs(c));
  PauliSum out(n_qubits);
  for (const auto& [c, p] : terms) {
    if (p.n_qubits() != n_qubits) throw DimensionError("PauliSum: qubit counts differ");
    const cplx w = c * p.prefactor();
    if (std::abs(w.imag()) > imag_tol * std::max(scale, 1.0))
      throw ContractError("PauliSum: term " + p.to_string() +
                          " has an imaginary weight; operator is not Hermitian");
    out.insert(w.real(), p.x_mask(), p.z_mask());
  }
  return out;
}

void PauliSum::add(double coefficient, const PauliString& p) {
  if (p.n_qubits() != n_) throw DimensionError("PauliSum::add: qubit counts differ");
  if (!p.is_hermitian()) throw ContractError("PauliSum::add: string is not Hermitian");
  insert(p.phase_exp() == 2 ? -coefficient : coefficient, p.x_mask(), p.z_mask());
}

void PauliSum::insert(double coefficient, std::uint64_t x, std::uint64_t z) {
  if (coefficient == 0.0) return;
  const auto [it, fresh] = index_.try_emplace({x, z}, terms_.size());
  if (fresh)
    terms_.push_back({coefficient, PauliString(n_, x, z, 0)});
  else
    terms_[it->second].coefficient += coefficient;
}

PauliSum PauliSum::scaled(double s) const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coefficient *= s;
  return out;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  if (n_ > 14) throw ArgumentError("PauliSum::to_dense: register too large");
  const Eigen::Index d = Eigen::Index{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : terms_) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const auto [to, amp] = t.string.apply_to_basis(static_cast<std::uint64_t>(b));
      m(static_cast<Eigen::Index>(to), b) += t.coefficient * amp;
    }
  }
  return m;
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw DimensionError("PauliSum +: qubit counts differ");
  PauliSum out = a;
  for (const auto& t : b.terms()) out.add(t.coefficient, t.string);
  return out;
}

}  // namespace syklab
