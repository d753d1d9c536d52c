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

#include "syklab/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "syklab/errors.hpp"

namespace syklab {

namespace {

// Box-Muller on a standard engine; std::normal_distribution is not
// reproducible across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do u1 = uniform();
    while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> sorted(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

StateVector sample_haar_state(int n_qubits, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > 30) throw ArgumentError("sample_haar_state: bad qubit count");
  Gaussian g(seed);
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Eigen::VectorXcd v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double re = g();
    v[i] = cplx(re, g());
  }
  return StateVector::normalized(std::move(v));
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  for (auto k : {EnsembleKind::haar_state, EnsembleKind::goe, EnsembleKind::gue, EnsembleKind::gse,
                 EnsembleKind::poisson_levels})
    if (to_string(k) == name) return k;
  throw ArgumentError("unknown ensemble '" + std::string(name) + "'");
}

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::haar_state: return "haar_state";
    case EnsembleKind::goe: return "goe";
    case EnsembleKind::gue: return "gue";
    case EnsembleKind::gse: return "gse";
    case EnsembleKind::poisson_levels: return "poisson_levels";
  }
  return "unknown";
}

std::vector<double> sample_rmt_spectrum(EnsembleKind kind, int dim, std::uint64_t seed) {
  if (dim < 4) throw ArgumentError("sample_rmt_spectrum: dim must be >= 4");
  Gaussian g(seed);
  const Eigen::Index d = dim;
  switch (kind) {
    case EnsembleKind::poisson_levels: {
      std::vector<double> out(static_cast<std::size_t>(dim));
      for (double& x : out) x = g.uniform();
      std::sort(out.begin(), out.end());
      return out;
    }
    case EnsembleKind::goe: {
      Eigen::MatrixXd a(d, d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) a(i, j) = g();
      const Eigen::MatrixXd h = (a + a.transpose()) / 2.0;
      return sorted(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues());
    }
    case EnsembleKind::gue: {
      Eigen::MatrixXcd a(d, d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
          const double re = g();
          a(i, j) = cplx(re, g());
        }
      const Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
      return sorted(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues());
    }
    case EnsembleKind::gse: {
      if (dim % 2 != 0) throw ArgumentError("sample_rmt_spectrum: gse needs an even dim");
      const Eigen::Index m = d / 2;
      // Quaternion-real Hermitian matrix as [[A, B], [-conj(B), conj(A)]]
      // with A Hermitian and B antisymmetric.
      Eigen::MatrixXcd a(m, m), b(m, m);
      for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i) {
          const double ar = g(), ai = g(), br = g(), bi = g();
          a(i, j) = cplx(ar, ai);
          b(i, j) = cplx(br, bi);
        }
      const Eigen::MatrixXcd ah = (a + a.adjoint()) / 2.0;
      const Eigen::MatrixXcd bs = (b - b.transpose()) / 2.0;
      Eigen::MatrixXcd h(d, d);
      h.topLeftCorner(m, m) = ah;
      h.topRightCorner(m, m) = bs;
      h.bottomLeftCorner(m, m) = -bs.conjugate();
      h.bottomRightCorner(m, m) = ah.conjugate();
      return sorted(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues());
    }
    case EnsembleKind::haar_state:
      throw ArgumentError("sample_rmt_spectrum: haar_state is a state ensemble, use sample_haar_state");
  }
  throw ArgumentError("sample_rmt_spectrum: unknown ensemble");
}

}  // namespace syklab
