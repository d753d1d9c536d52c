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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "syklab/errors.hpp"
#include "syklab/pauli.hpp"

using namespace syklab;

namespace {

PauliString random_string(int n, std::mt19937_64& rng) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  return PauliString(n, rng() & mask, rng() & mask, static_cast<int>(rng() % 4));
}

// Dense matrix of an arbitrary string through the Kronecker oracle.
Eigen::MatrixXcd oracle_matrix(const PauliString& p) {
  const std::string text = p.to_string();
  const auto space = text.find(' ');
  const std::string phase = text.substr(0, space);
  const cplx pre = phase == "+1" ? cplx(1) : phase == "+i" ? cplx(0, 1) : phase == "-1" ? cplx(-1) : cplx(0, -1);
  return pre * oracle::pauli_matrix(text.substr(space + 1));
}

}  // namespace

TEST_CASE("single-qubit products follow the Pauli table") {
  const auto x = PauliString::single(1, 1, 'X');
  const auto z = PauliString::single(1, 1, 'Z');
  CHECK(multiply(x, x) == PauliString::identity(1));
  const auto xz = multiply(x, z);
  CHECK(xz.x_mask() == 1);
  CHECK(xz.z_mask() == 1);
  CHECK(xz.to_string() == "-i Y");
}

TEST_CASE("two-qubit product matches the dense product") {
  const auto a = PauliString::parse("+1 XZ");  // Z on qubit 1, X on qubit 2
  const auto b = PauliString::parse("+1 YZ");
  const auto c = multiply(a, b);
  CHECK(c.to_string() == "+i ZI");
  CHECK((oracle_matrix(c) - oracle_matrix(a) * oracle_matrix(b)).norm() < 1e-12);
}

TEST_CASE("products agree with dense matrices on random strings") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 400; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto a = random_string(n, rng), b = random_string(n, rng), c = random_string(n, rng);
    const auto ab = multiply(a, b);
    CHECK((oracle_matrix(ab) - oracle_matrix(a) * oracle_matrix(b)).norm() < 1e-12);
    CHECK(multiply(a, multiply(b, c)) == multiply(multiply(a, b), c));
    const Eigen::MatrixXcd m = oracle_matrix(a);
    CHECK(a.is_hermitian() == ((m - m.adjoint()).norm() < 1e-12));
    CHECK((to_dense(a) - m).norm() < 1e-12);
    CHECK(commutes(a, b) == ((m * oracle_matrix(b) - oracle_matrix(b) * m).norm() < 1e-12));
  }
}

TEST_CASE("mismatched sizes are rejected") {
  CHECK_THROWS_AS(multiply(PauliString::identity(2), PauliString::identity(3)), DimensionError);
}

TEST_CASE("basis action") {
  const auto id = PauliString::identity(3);
  CHECK(id.apply_to_basis(5) == std::pair<std::uint64_t, cplx>{5, 1.0});
  CHECK(PauliString::single(3, 1, 'X').apply_to_basis(0) == std::pair<std::uint64_t, cplx>{1, 1.0});
  CHECK(PauliString::single(3, 1, 'Z').apply_to_basis(1) == std::pair<std::uint64_t, cplx>{1, -1.0});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_string(3, rng);
    const auto m = oracle_matrix(p);
    const std::uint64_t b = rng() % 8;
    const auto [idx, amp] = p.apply_to_basis(b);
    CHECK(idx == (b ^ p.x_mask()));
    CHECK(std::abs(m(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(b)) - amp) < 1e-12);
    CHECK(std::abs(std::abs(amp) - 1.0) < 1e-12);
  }
}

TEST_CASE("expectation values") {
  const auto plus = StateVector::normalized(Eigen::Vector2cd(1, 1));
  CHECK(expectation(PauliString::single(1, 1, 'X'), plus) == doctest::Approx(1.0));
  CHECK(expectation(PauliString::single(1, 1, 'Z'), StateVector::basis(1, 0)) == doctest::Approx(1.0));
  CHECK(expectation(PauliString::identity(4), StateVector(oracle::random_state(4, 1))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(expectation(PauliString(1, 1, 0, 1), plus), ContractError);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    auto p = random_string(n, rng);
    p = PauliString(n, p.x_mask(), p.z_mask(), 2 * static_cast<int>(rng() % 2));
    const auto v = oracle::random_state(n, rng());
    const double want = (v.adjoint() * oracle_matrix(p) * v)(0, 0).real();
    CHECK(std::abs(expectation(p, StateVector(v)) - want) < 1e-12);
    CHECK((syklab::apply(p, v) - oracle_matrix(p) * v).norm() < 1e-12);
  }
}

TEST_CASE("state vectors enforce normalization and power-of-two length") {
  CHECK_THROWS_AS(StateVector(Eigen::Vector2cd(1, 1)), ContractError);
  CHECK_THROWS(StateVector(Eigen::Vector3cd(1, 0, 0)));
  CHECK(StateVector::basis(3, 6).n_qubits() == 3);
}

TEST_CASE("text rendering round trips") {
  for (const char* s : {"+1 XZIY", "-i ZZ", "+i Y", "-1 IIII"}) CHECK(PauliString::parse(s).to_string() == s);
  CHECK_THROWS(PauliString::parse("+2 XX"));
  CHECK_THROWS(PauliString::parse("+1 XQ"));
}

TEST_CASE("Pauli sums merge duplicates and reject complex weights") {
  PauliSum s(2);
  s.add(1.0, PauliString::parse("+1 XZ"));
  s.add(2.0, PauliString::parse("+1 XZ"));
  s.add(0.5, PauliString::parse("-1 ZZ"));
  CHECK(s.size() == 2);
  const Eigen::MatrixXcd want = 3.0 * oracle::pauli_matrix("XZ") - 0.5 * oracle::pauli_matrix("ZZ");
  CHECK((s.to_dense() - want).norm() < 1e-12);

  const auto xy = PauliString::parse("+i XY");  // anti-Hermitian times i is fine
  CHECK(PauliSum::from_complex(2, {{cplx(0, -1), xy}}).size() == 1);
  CHECK_THROWS_AS(PauliSum::from_complex(2, {{cplx(1, 0), xy}}), ContractError);

  PauliSum a(2), b(2);
  a.add(1.0, PauliString::parse("+1 XX"));
  b.add(-1.0, PauliString::parse("+1 XX"));
  CHECK((a + b).to_dense().norm() < 1e-15);
}
