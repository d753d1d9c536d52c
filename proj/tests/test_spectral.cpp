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
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "syklab/errors.hpp"
#include "syklab/spectral.hpp"

using namespace syklab;

namespace {

Spectrum from_values(std::vector<double> v, bool vectors = true) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(v.size()),
                                              static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v[i];
  return full_spectrum(m, vectors);
}

SparseHamiltonian syk_matrix(int n, int q, std::uint64_t seed) {
  return assemble_sparse(build_syk(sample_couplings({n, q, 1.0, seed})));
}

double excess_kurtosis(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

}  // namespace

TEST_CASE("trivial spectra") {
  const auto s = from_values({3, 1, 2});
  CHECK(s.eigenvalues(0) == doctest::Approx(1));
  CHECK(s.eigenvalues(2) == doctest::Approx(3));

  PauliSum z(1);
  z.add(-1.0, PauliString::single(1, 1, 'Z'));
  const auto sz = full_spectrum(assemble_sparse(z), true);
  CHECK(sz.eigenvalues(0) == doctest::Approx(-1));
  CHECK(sz.eigenvalues(1) == doctest::Approx(1));
  const auto g = select_eigenstate(sz, EigenstateKind::ground);
  CHECK(std::abs(g.amplitudes()(0)) == doctest::Approx(1.0));
}

TEST_CASE("dense path matches an independent eigensolver") {
  for (int q : {2, 4}) {
    const auto h = syk_matrix(8, q, 31);
    const auto s = full_spectrum(h, true);
    const auto dense = h.to_dense();
    const auto want = oracle::eigvalsh(dense);
    REQUIRE(s.size() == want.size());
    double trace = dense.trace().real(), sum = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(std::abs(s.eigenvalues(static_cast<Eigen::Index>(i)) - want[i]) < 1e-9);
      sum += want[i];
    }
    CHECK(std::abs(s.eigenvalues.sum() - trace) < 1e-8 * (1.0 + std::abs(trace)));
    CHECK(std::abs(sum - trace) < 1e-8 * (1.0 + std::abs(trace)));
    const double hnorm = dense.norm();
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
      const Eigen::VectorXcd v = s.eigenvectors->col(k);
      CHECK((dense * v - s.eigenvalues(k) * v).norm() <= 1e-8 * hnorm);
    }
    for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k) CHECK(s.eigenvalues(k) >= s.eigenvalues(k - 1));
  }
}

TEST_CASE("dense limit") {
  const auto h = syk_matrix(8, 4, 1);
  CHECK_THROWS_AS(full_spectrum(h, false, DenseOptions{8}), ResourceError);
}

TEST_CASE("eigenstate selection") {
  const auto s = from_values({-2, -1, 0.5, 3});
  CHECK(select_index(s, EigenstateKind::middle) == 2);
  CHECK(select_index(from_values({-3, -0.1, 0.1, 2}), EigenstateKind::middle) == 1);
  CHECK(select_index(s, EigenstateKind::ground) == 0);
  CHECK_THROWS_AS(select_eigenstate(from_values({1, 2}, false), EigenstateKind::ground), ContractError);
}

TEST_CASE("gaps collapse degenerate levels") {
  CHECK(spectral_gap(from_values({-1, -1, 1, 1})) == doctest::Approx(2));
  CHECK(spectral_gap(from_values({0, 5})) == doctest::Approx(5));
  CHECK_THROWS_AS(spectral_gap(from_values({1})), ContractError);
  const std::vector<double> levels{0.0, 1e-12, 1.0, 1.0 + 1e-10, 2.0};
  CHECK(collapse_degenerate(levels) == std::vector<double>{0.0, 1.0, 2.0});

  // Four-body model at N = 12 has paired levels, so the gap is between pairs.
  const auto s = full_spectrum(syk_matrix(12, 4, 4), false);
  CHECK(spectral_gap(s) > 1e-3);
}

TEST_CASE("parity sectors") {
  const auto h = syk_matrix(10, 4, 8);
  CHECK(h.preserves_parity());
  const auto s = full_spectrum(h, true);
  REQUIRE(s.sectors.size() == s.size());
  CHECK(std::count(s.sectors.begin(), s.sectors.end(), 0) == 16);
  const auto levels = statistics_levels(s);
  CHECK(levels.size() == 2);
  for (const auto& l : levels) CHECK(l.size() == 16);
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    const Eigen::VectorXcd v = s.eigenvectors->col(k);
    for (Eigen::Index b = 0; b < v.size(); ++b)
      if (std::abs(v(b)) > 1e-10) CHECK(std::popcount(static_cast<std::uint64_t>(b)) % 2 == s.sectors[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("Lanczos agrees with the dense path") {
  for (int n : {8, 10, 12}) {
    for (int q : {2, 4}) {
      const auto h = syk_matrix(n, q, 100 + static_cast<std::uint64_t>(n));
      const auto dense = full_spectrum(h, false);
      const auto gs = ground_state(h);
      CHECK(gs.converged);
      CHECK(std::abs(gs.value - dense.eigenvalues(0)) < 1e-7);
      const Eigen::VectorXcd r = h * gs.vector - gs.value * gs.vector;
      CHECK(r.norm() < 1e-6);
      CHECK(std::abs(gs.vector.norm() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("density of states") {
  const auto hist = dos_histogram({from_values({-1, -1, 1, 1}, false)}, 2);
  CHECK(hist.n_samples == 2);
  CHECK(stripped_levels({from_values({-1, -1, 1, 1}, false)}) == std::vector<double>{-1, 1});
  CHECK_THROWS_AS(dos_histogram({}, 10), ArgumentError);

  std::vector<Spectrum> four;
  for (std::uint64_t seed = 0; seed < 20; ++seed) four.push_back(full_spectrum(syk_matrix(12, 4, seed), false));
  const double k4 = excess_kurtosis(stripped_levels(four));
  MESSAGE("four-body excess kurtosis " << k4);
  CHECK(std::abs(k4 + 1.0) < 0.3);
}

TEST_CASE("spectrum CSV") {
  auto s = from_values({-1, 2}, false);
  s.meta = {7, 8, 0.25};
  std::ostringstream out;
  write_spectrum_csv(out, s);
  CHECK(out.str() == "seed,N,g,index,eigenvalue\n7,8,0.25,0,-1\n7,8,0.25,1,2\n");
}
