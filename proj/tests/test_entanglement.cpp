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

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "syklab/entanglement.hpp"
#include "syklab/errors.hpp"
#include "syklab/haar.hpp"

using namespace syklab;

namespace {

EntanglementSpectrum spectrum_of(std::vector<double> l) {
  EntanglementSpectrum s;
  s.eigenvalues = std::move(l);
  s.subsystem_size = static_cast<int>(std::log2(static_cast<double>(s.eigenvalues.size())));
  s.n_qubits = 2 * s.subsystem_size;
  return s;
}

// Reduced density matrix by explicit index bookkeeping over the full |psi><psi|.
Eigen::MatrixXcd dense_rdm(const Eigen::VectorXcd& psi, const std::vector<int>& keep) {
  const int r = static_cast<int>(keep.size());
  const Eigen::Index da = Eigen::Index{1} << r;
  const Eigen::MatrixXcd full = psi * psi.adjoint();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
  auto sub_index = [&](Eigen::Index b) {
    Eigen::Index a = 0;
    for (int k = 0; k < r; ++k) a |= ((b >> (keep[static_cast<std::size_t>(k)] - 1)) & 1) << k;
    return a;
  };
  std::uint64_t keep_mask = 0;
  for (int q : keep) keep_mask |= std::uint64_t{1} << (q - 1);
  for (Eigen::Index i = 0; i < full.rows(); ++i)
    for (Eigen::Index j = 0; j < full.cols(); ++j)
      if ((static_cast<std::uint64_t>(i) & ~keep_mask) == (static_cast<std::uint64_t>(j) & ~keep_mask))
        rho(sub_index(i), sub_index(j)) += full(i, j);
  return rho;
}

std::vector<double> dense_rdm_eigenvalues(const Eigen::VectorXcd& psi, int, const std::vector<int>& keep) {
  auto ev = oracle::eigvalsh(dense_rdm(psi, keep));
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

// Modular entropy S~_a = a^2 d/da[(a-1)/a S_a], by central differences.
double modular_entropy(const EntanglementSpectrum& s, double a, double h) {
  auto g = [&](double b) { return (b - 1.0) / b * renyi_entropy(s, b); };
  return a * a * (g(a + h) - g(a - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("bipartition sampling") {
  const auto all = sample_bipartitions(4, 0.5, 6, 1);
  CHECK(all.size() == 6);
  std::set<std::vector<int>> seen;
  for (const auto& b : all) seen.insert(b.subsystem);
  CHECK(seen.size() == 6);

  const auto big = sample_bipartitions(11, 5, 22, 3);
  CHECK(big.size() == 22);
  seen.clear();
  for (const auto& b : big) {
    CHECK(b.size() == 5);
    CHECK(std::is_sorted(b.subsystem.begin(), b.subsystem.end()));
    seen.insert(b.subsystem);
  }
  CHECK(seen.size() == 22);
  const auto again = sample_bipartitions(11, 5, 22, 3);
  for (std::size_t i = 0; i < big.size(); ++i) CHECK(big[i].subsystem == again[i].subsystem);

  CHECK_THROWS_AS(sample_bipartitions(4, 0.5, 7, 1), ArgumentError);
  CHECK_THROWS_AS(sample_bipartitions(5, 0.5, 2, 1), ArgumentError);
  CHECK_THROWS_AS(sample_bipartitions(4, 0, 1, 1), ArgumentError);

  // Uniformity: each of the C(6,3) = 20 subsets appears about equally often.
  std::map<std::vector<int>, int> hits;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) hits[sample_bipartitions(6, 3, 1, seed)[0].subsystem]++;
  CHECK(hits.size() == 20);
  for (const auto& [k, v] : hits) CHECK(std::abs(v - 200) < 60);
}

TEST_CASE("partial trace") {
  const auto product = partial_trace(StateVector::basis(2, 0), {2, {1}});
  CHECK(product.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(product.eigenvalues[1] == doctest::Approx(0.0));

  const auto bell = StateVector::normalized(Eigen::Vector4cd(1, 0, 0, 1));
  const auto b = partial_trace(bell, {2, {1}});
  CHECK(b.eigenvalues[0] == doctest::Approx(0.5));
  CHECK(b.eigenvalues[1] == doctest::Approx(0.5));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto v = oracle::random_state(3, seed);
    const auto got = partial_trace(StateVector(v), {3, {1, 3}}).eigenvalues;
    const auto want = dense_rdm_eigenvalues(v, 3, {1, 3});
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-10);
  }

  // Schmidt symmetry between a cut and its complement.
  const StateVector psi(oracle::random_state(7, 99));
  const auto a = partial_trace(psi, {7, {2, 3, 6}}).eigenvalues;
  const auto c = partial_trace(psi, {7, {1, 4, 5, 7}}).eigenvalues;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - c[i]) < 1e-10);
    sum += a[i];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = a.size(); i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-10);
}

TEST_CASE("parity-resolved spectra") {
  // No definite parity: one block, the ascending full spectrum.
  const StateVector mixed(oracle::random_state(6, 4));
  const Bipartition cut{6, {1, 4, 5}};
  const auto whole = partial_trace(mixed, cut).eigenvalues;
  const auto one = parity_resolved_spectra(mixed, cut);
  REQUIRE(one.size() == 1);
  CHECK(std::equal(one[0].begin(), one[0].end(), whole.rbegin(), [](double a, double b) { return std::abs(a - b) < 1e-12; }));

  // Even-parity state: the RDM blocks are the parity-restricted submatrices.
  Eigen::VectorXcd v = oracle::random_state(6, 5);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::popcount(static_cast<std::uint64_t>(i)) & 1) v(i) = 0.0;
  v.normalize();
  const auto rho = dense_rdm(v, cut.subsystem);
  const auto blocks = parity_resolved_spectra(StateVector(v), cut);
  REQUIRE(blocks.size() == 2);
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index a = 0; a < rho.rows(); ++a)
      if ((std::popcount(static_cast<std::uint64_t>(a)) & 1) == parity) idx.push_back(a);
    const auto want = oracle::eigvalsh(rho(idx, idx));
    const auto& got = blocks[static_cast<std::size_t>(parity)];
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-10);
    // rho commutes with the subsystem parity, so off-block entries vanish.
    for (Eigen::Index a = 0; a < rho.rows(); ++a)
      if ((std::popcount(static_cast<std::uint64_t>(a)) & 1) != parity)
        for (auto b : idx) CHECK(std::abs(rho(a, b)) < 1e-12);
  }
}

TEST_CASE("Renyi entropies") {
  const auto flat = spectrum_of({0.25, 0.25, 0.25, 0.25});
  for (double a : {0.5, 1.0, 2.0, 3.0}) CHECK(renyi_entropy(flat, a) == doctest::Approx(std::log(4.0)));
  const auto pure = spectrum_of({1, 0, 0, 0});
  for (double a : {0.5, 1.0, 2.0}) CHECK(renyi_entropy(pure, a) == doctest::Approx(0.0));
  CHECK(renyi_entropy(spectrum_of({0.5, 0.5}), 2.0) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(renyi_entropy(flat, 0.0), ArgumentError);
  CHECK_THROWS_AS(renyi_entropy(flat, -1.0), ArgumentError);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = partial_trace(StateVector(oracle::random_state(6, seed)), {6, {1, 2, 5}});
    double prev = 1e300;
    for (double a : {0.5, 1.0, 2.0, 3.0, 5.0}) {
      const double v = renyi_entropy(s, a);
      CHECK(v <= prev + 1e-12);
      CHECK(v >= 0.0);
      CHECK(v <= 3.0 * std::log(2.0) + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("capacity and anti-flatness") {
  CHECK(capacity_of_entanglement(spectrum_of({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(0.0));
  for (double p : {0.1, 0.3, 0.45}) {
    const double l = std::log(p / (1.0 - p));
    CHECK(capacity_of_entanglement(spectrum_of({1 - p, p})) == doctest::Approx(-p * (1 - p) * l * l));
  }
  // Variance formula against the modular-entropy derivative.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = partial_trace(StateVector(oracle::random_state(6, 50 + seed)), {6, {1, 2, 3}});
    const double h = 1e-4;
    const double deriv = (modular_entropy(s, 1.0 + h, h) - modular_entropy(s, 1.0 - h, h)) / (2.0 * h);
    CHECK(std::abs(deriv - capacity_of_entanglement(s)) < 1e-5);
  }

  CHECK(log_antiflatness(spectrum_of({0.5, 0.5})) == doctest::Approx(0.0));
  const double s2 = -std::log(0.81 + 0.01), s3 = -0.5 * std::log(0.729 + 0.001);
  CHECK(log_antiflatness(spectrum_of({0.9, 0.1})) == doctest::Approx(2.0 * (s2 - s3)));

  // Stabilizer states: basis and GHZ spectra are flat.
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(16);
  ghz(0) = ghz(15) = 1.0 / std::sqrt(2.0);
  for (const auto& psi : {StateVector::basis(4, 5), StateVector(ghz)}) {
    const auto s = partial_trace(psi, {4, {1, 3}});
    CHECK(std::abs(log_antiflatness(s)) < 1e-12);
    CHECK(std::abs(capacity_of_entanglement(s)) < 1e-12);
  }
}

TEST_CASE("normalized RDM curve") {
  const auto c = normalized_rdm_curve(spectrum_of({0.5, 0.5}));
  REQUIRE(c.size() == 2);
  CHECK(c[0].first == doctest::Approx(0.5));
  CHECK(c[1].first == doctest::Approx(0.5));
  CHECK(c[0].second == doctest::Approx(0.5));
  CHECK(c[1].second == doctest::Approx(1.0));
  const auto p = normalized_rdm_curve(spectrum_of(std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(p[0].first == doctest::Approx(0.5 * std::sqrt(8.0)));
  EntanglementSpectrum off = spectrum_of({0.5, 0.5});
  off.n_qubits = 6;
  CHECK_THROWS_AS(normalized_rdm_curve(off), ArgumentError);

  CHECK(marchenko_pastur_eta(0.0) == doctest::Approx(1.0));
  CHECK(marchenko_pastur_eta(1.0) == doctest::Approx(0.0));
  const auto mp = marchenko_pastur_bin_probabilities(20);
  double total = 0.0;
  for (double q : mp) total += q;
  CHECK(total == doctest::Approx(1.0));

  // Haar half-chain curves sit closer to the Marchenko-Pastur law than to a
  // uniform distribution of x.
  std::vector<double> avg(20, 0.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = partial_trace(sample_haar_state(10, seed), {10, {1, 2, 3, 4, 5}});
    const auto q = curve_bin_probabilities(normalized_rdm_curve(s), 20);
    for (std::size_t i = 0; i < 20; ++i) avg[i] += q[i] / 50.0;
  }
  auto kl = [](const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > 0) d += p[i] * std::log(p[i] / std::max(q[i], 1e-12));
    return d;
  };
  CHECK(kl(avg, mp) < kl(avg, std::vector<double>(20, 0.05)));
}

TEST_CASE("Haar references") {
  CHECK(haar_reference({HaarReferenceKind::page_entropy, 0, 0, 2, 0.5}) == doctest::Approx(1.0));
  CHECK(haar_reference({HaarReferenceKind::page_entropy, 0, 0, 2, 0.25}) == doctest::Approx(0.5));
  CHECK(haar_reference({HaarReferenceKind::capacity}) == doctest::Approx(-0.539868).epsilon(1e-6));
  CHECK(haar_reference({HaarReferenceKind::log_antiflatness}) == doctest::Approx(0.2231435513));
  CHECK(haar_reference({HaarReferenceKind::sre_scaling, 10}) == doctest::Approx(8.0));
  CHECK(haar_reference({HaarReferenceKind::mp_curve, 0, 0, 2, 0.5, 1.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(parse_haar_reference_kind("nope"), ArgumentError);
  CHECK(parse_haar_reference_kind("capacity") == HaarReferenceKind::capacity);

  // alpha = 2 reduces to -ln(1/dA + 1/dB).
  for (auto [n, r] : {std::pair{10, 5}, std::pair{12, 4}, std::pair{9, 3}}) {
    const double want = -std::log(std::ldexp(1.0, -r) + std::ldexp(1.0, r - n));
    CHECK(haar_reference({HaarReferenceKind::renyi_page, n, r, 2}) == doctest::Approx(want));
  }

  // Exact Page value against sampled Haar states, and its large-n limit.
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, cap = 0.0, flat = 0.0;
  const int m = 500;
  for (std::uint64_t seed = 0; seed < m; ++seed) {
    const auto s = partial_trace(sample_haar_state(10, 1000 + seed), {10, {1, 2, 3, 4, 5}});
    s1 += renyi_entropy(s, 1.0) / m;
    s2 += renyi_entropy(s, 2.0) / m;
    s3 += renyi_entropy(s, 3.0) / m;
    cap += capacity_of_entanglement(s) / m;
    flat += log_antiflatness(s) / m;
  }
  CHECK(std::abs(s1 - page_entropy_exact(10, 5)) < 0.01);
  CHECK(std::abs(s2 - haar_reference({HaarReferenceKind::renyi_page, 10, 5, 2})) < 0.02);
  CHECK(std::abs(s3 - haar_reference({HaarReferenceKind::renyi_page, 10, 5, 3})) < 0.03);
  CHECK(std::abs(cap - haar_reference({HaarReferenceKind::capacity})) < 0.05);
  CHECK(std::abs(flat - haar_reference({HaarReferenceKind::log_antiflatness})) < 0.02);
  CHECK(page_entropy_exact(4, 2) == doctest::Approx(1.0 / 5 + 1.0 / 6 + 1.0 / 7 + 1.0 / 8 + 1.0 / 9 +
                                                     1.0 / 10 + 1.0 / 11 + 1.0 / 12 + 1.0 / 13 +
                                                     1.0 / 14 + 1.0 / 15 + 1.0 / 16 - 3.0 / 8));
  const double big = page_entropy_exact(40, 20);
  CHECK(2.0 * big / (40 * std::numbers::ln2) == doctest::Approx(1.0 - 1.0 / (40 * std::numbers::ln2)).epsilon(1e-9));
}

TEST_CASE("free-fermion references") {
  const double k_half = 2.0 - 1.0 / std::numbers::ln2;
  CHECK(syk2_reference(Syk2ReferenceKind::mean_entropy, 1, 0.5) == doctest::Approx(k_half * std::numbers::ln2));
  CHECK(k_half == doctest::Approx(0.5573).epsilon(1e-4));
  CHECK(syk2_reference(Syk2ReferenceKind::mean_entropy, 8, 0.5) <
        page_entropy_exact(16, 8));
  CHECK(std::abs(syk2_reference(Syk2ReferenceKind::log_antiflatness, 1, 1e-9)) < 1e-6);
  CHECK(syk2_reference(Syk2ReferenceKind::log_antiflatness, 8, 0.5) > 0.0);
  CHECK_THROWS_AS(syk2_reference(Syk2ReferenceKind::mean_entropy, 1, 0.0), ArgumentError);
  CHECK_THROWS_AS(syk2_reference(Syk2ReferenceKind::log_antiflatness, 1, 1.0), ArgumentError);

  // Terminating 2F1 against direct polynomial evaluation.
  CHECK(hypergeometric_2f1_terminating(0.5, 0, 2.0, 0.7) == doctest::Approx(1.0));
  CHECK(hypergeometric_2f1_terminating(0.5, 1, 2.0, 0.7) == doctest::Approx(1.0 - 0.25 * 0.7));
  CHECK(hypergeometric_2f1_terminating(0.5, 2, 2.0, 1.0) ==
        doctest::Approx(1.0 - 0.5 + 0.5 * 1.5 * 2.0 / (2.0 * 3.0 * 2.0)));
  // Both branches agree with a short direct sum.
  const double z = 0.8;
  double direct = 0.0, t = 1.0;
  for (int k = 0; k <= 4; ++k) {
    direct += t;
    t *= (0.5 + k) * (-4 + k) / ((2.0 + k) * (k + 1.0)) * z;
  }
  CHECK(hypergeometric_2f1_terminating(0.5, 4, 2.0, z) == doctest::Approx(direct).epsilon(1e-13));
  // 2F1(a, -m; c; 1) = (c-a)_m / (c)_m.
  double want = 1.0;
  for (int k = 0; k < 30; ++k) want *= (1.5 + k) / (2.0 + k);
  CHECK(hypergeometric_2f1_terminating(0.5, 30, 2.0, 1.0) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("relative gap") {
  CHECK(relative_gap(1.0, 1.0) == 0.0);
  CHECK(relative_gap(0.9, 1.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(relative_gap(1.0, 0.0), ArgumentError);
}
