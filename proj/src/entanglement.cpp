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

#include "syklab/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "syklab/errors.hpp"

namespace syklab {

namespace {

constexpr double kLogFloor = 1e-14;  // 0 ln 0 := 0 below this

// Unbiased integer in [0, n) from raw engine output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return v % n;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::vector<int>> all_subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(idx);
    int pos = r - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - r + pos + 1) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < r; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

double power_sum(const EntanglementSpectrum& spec, double alpha) {
  double s = 0.0;
  for (double l : spec.eigenvalues)
    if (l > 0.0) s += std::pow(l, alpha);
  return s;
}

}  // namespace

std::uint64_t Bipartition::mask() const {
  std::uint64_t m = 0;
  for (int q : subsystem) m |= std::uint64_t{1} << (q - 1);
  return m;
}

void Bipartition::validate() const {
  if (n_qubits < 2 || n_qubits > kMaxQubits) throw ArgumentError("Bipartition: bad qubit count");
  if (subsystem.empty() || size() > n_qubits - 1)
    throw ArgumentError("Bipartition: subsystem size must be in [1, n-1]");
  for (std::size_t i = 0; i < subsystem.size(); ++i) {
    if (subsystem[i] < 1 || subsystem[i] > n_qubits)
      throw ArgumentError("Bipartition: qubit index out of range");
    if (i > 0 && subsystem[i] <= subsystem[i - 1])
      throw ArgumentError("Bipartition: subsystem must be sorted and distinct");
  }
}

std::vector<Bipartition> sample_bipartitions(int n_qubits, int subsystem_size, int count,
                                             std::uint64_t seed) {
  if (n_qubits < 2 || subsystem_size < 1 || subsystem_size > n_qubits - 1)
    throw ArgumentError("sample_bipartitions: subsystem size must be in [1, n-1]");
  if (count < 1) throw ArgumentError("sample_bipartitions: count must be positive");
  const double total = binomial(n_qubits, subsystem_size);
  if (count > total)
    throw ArgumentError("sample_bipartitions: requested " + std::to_string(count) +
                        " bipartitions but only " + std::to_string(static_cast<long long>(total)) +
                        " exist");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> chosen;
  if (total <= 200000) {
    auto subsets = all_subsets(n_qubits, subsystem_size);
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
      const auto j = i + uniform_below(rng, subsets.size() - i);
      std::swap(subsets[i], subsets[j]);
    }
    chosen.assign(subsets.begin(), subsets.begin() + count);
  } else {
    std::set<std::vector<int>> seen;
    while (static_cast<int>(seen.size()) < count) {
      std::vector<int> pool(static_cast<std::size_t>(n_qubits));
      for (int i = 0; i < n_qubits; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
      for (std::size_t i = 0; i < static_cast<std::size_t>(subsystem_size); ++i)
        std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
      std::vector<int> s(pool.begin(), pool.begin() + subsystem_size);
      std::sort(s.begin(), s.end());
      seen.insert(std::move(s));
    }
    chosen.assign(seen.begin(), seen.end());
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Bipartition> out;
  for (auto& s : chosen) out.push_back({n_qubits, std::move(s)});
  return out;
}

std::vector<Bipartition> sample_bipartitions(int n_qubits, double f, int count,
                                             std::uint64_t seed) {
  const double r = f * n_qubits;
  if (std::abs(r - std::round(r)) > 1e-9)
    throw ArgumentError("sample_bipartitions: f * n is not an integer");
  return sample_bipartitions(n_qubits, static_cast<int>(std::round(r)), count, seed);
}

namespace {

// psi reshaped as a (2^R x 2^(n-R)) matrix, rows indexed by subsystem bits.
Eigen::MatrixXcd schmidt_matrix(const StateVector& psi, const Bipartition& b) {
  b.validate();
  if (b.n_qubits != psi.n_qubits()) throw DimensionError("partial_trace: qubit counts differ");
  const int r = b.size();
  const int n = b.n_qubits;
  std::vector<int> a_bits, b_bits;
  const std::uint64_t mask = b.mask();
  for (int q = 0; q < n; ++q) ((mask >> q) & 1 ? a_bits : b_bits).push_back(q);

  Eigen::MatrixXcd m(Eigen::Index{1} << r, Eigen::Index{1} << (n - r));
  const auto& amps = psi.amplitudes();
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const auto bits = static_cast<std::uint64_t>(i);
    Eigen::Index ia = 0, ib = 0;
    for (std::size_t k = 0; k < a_bits.size(); ++k) ia |= static_cast<Eigen::Index>((bits >> a_bits[k]) & 1) << k;
    for (std::size_t k = 0; k < b_bits.size(); ++k) ib |= static_cast<Eigen::Index>((bits >> b_bits[k]) & 1) << k;
    m(ia, ib) = amps[i];
  }
  return m;
}

}  // namespace

EntanglementSpectrum partial_trace(const StateVector& psi, const Bipartition& b) {
  const Eigen::MatrixXcd m = schmidt_matrix(psi, b);
  const int r = b.size();
  const int n = b.n_qubits;
  const Eigen::Index da = m.rows(), db = m.cols();
  // The smaller Gram matrix has the same nonzero spectrum.
  const Eigen::MatrixXcd gram = da <= db ? Eigen::MatrixXcd(m * m.adjoint())
                                         : Eigen::MatrixXcd(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  EntanglementSpectrum out;
  out.n_qubits = n;
  out.subsystem_size = r;
  out.eigenvalues.assign(static_cast<std::size_t>(da), 0.0);
  double total = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double l = std::max(es.eigenvalues()[k], 0.0);
    out.eigenvalues[static_cast<std::size_t>(k)] = l;
    total += l;
  }
  for (double& l : out.eigenvalues) l /= total;
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
  return out;
}

std::vector<std::vector<double>> parity_resolved_spectra(const StateVector& psi, const Bipartition& b) {
  constexpr double kMixedWeight = 1e-10;
  const auto& amps = psi.amplitudes();
  double odd = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (std::popcount(static_cast<std::uint64_t>(i)) & 1) odd += std::norm(amps[i]);
  if (std::min(odd, 1.0 - odd) > kMixedWeight) {
    const auto whole = partial_trace(psi, b);
    return {std::vector<double>(whole.eigenvalues.rbegin(), whole.eigenvalues.rend())};
  }
  const Eigen::MatrixXcd m = schmidt_matrix(psi, b);
  std::vector<std::vector<double>> out(2);
  double total = 0.0;
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index a = 0; a < m.rows(); ++a)
      if ((std::popcount(static_cast<std::uint64_t>(a)) & 1) == parity) rows.push_back(a);
    const Eigen::MatrixXcd block = m(rows, Eigen::all);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block * block.adjoint(), Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      out[static_cast<std::size_t>(parity)].push_back(std::max(es.eigenvalues()[k], 0.0));
      total += out[static_cast<std::size_t>(parity)].back();
    }
  }
  for (auto& block : out) {
    for (double& l : block) l /= total;
    std::sort(block.begin(), block.end());
  }
  return out;
}

double renyi_entropy(const EntanglementSpectrum& spec, double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("renyi_entropy: alpha must be positive");
  if (alpha == 1.0) {
    double s = 0.0;
    for (double l : spec.eigenvalues)
      if (l > kLogFloor) s -= l * std::log(l);
    return s;
  }
  double z = 0.0;
  for (double l : spec.eigenvalues)
    if (l > kLogFloor) z += std::pow(l, alpha);
  return std::log(z) / (1.0 - alpha);
}

double capacity_of_entanglement(const EntanglementSpectrum& spec) {
  double m1 = 0.0, m2 = 0.0;
  for (double l : spec.eigenvalues) {
    if (l <= kLogFloor) continue;
    const double ln = std::log(l);
    m1 += l * ln;
    m2 += l * ln * ln;
  }
  return -(m2 - m1 * m1);
}

double log_antiflatness(const EntanglementSpectrum& spec) {
  const double p2 = power_sum(spec, 2.0), p3 = power_sum(spec, 3.0);
  // 2 (S_2 - S_3) = 2 (-ln p2 + ln(p3) / 2) = ln(p3 / p2^2)
  return std::log(p3) - 2.0 * std::log(p2);
}

std::vector<std::pair<double, double>> normalized_rdm_curve(const EntanglementSpectrum& spec) {
  if (spec.subsystem_size != half_subsystem(spec.n_qubits))
    throw ArgumentError("normalized_rdm_curve: needs a half-system bipartition");
  const auto d = static_cast<double>(spec.eigenvalues.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(spec.eigenvalues.size());
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k)
    out.emplace_back(0.5 * std::sqrt(spec.eigenvalues[k] * d), static_cast<double>(k + 1) / d);
  return out;
}

double relative_gap(double s1, double reference) {
  if (reference == 0.0) throw ArgumentError("relative_gap: reference is zero");
  return std::abs((s1 - reference) / reference);
}

double marchenko_pastur_eta(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return 1.0 - (2.0 / std::numbers::pi) * (x * std::sqrt(1.0 - x * x) + std::asin(x));
}

std::vector<double> marchenko_pastur_bin_probabilities(int bins) {
  if (bins < 1) throw ArgumentError("marchenko_pastur_bin_probabilities: bins must be positive");
  std::vector<double> p(static_cast<std::size_t>(bins));
  for (int i = 0; i < bins; ++i)
    p[static_cast<std::size_t>(i)] = marchenko_pastur_eta(static_cast<double>(i) / bins) -
                                     marchenko_pastur_eta(static_cast<double>(i + 1) / bins);
  return p;
}

std::vector<double> curve_bin_probabilities(const std::vector<std::pair<double, double>>& curve,
                                            int bins) {
  if (bins < 1) throw ArgumentError("curve_bin_probabilities: bins must be positive");
  if (curve.empty()) throw ArgumentError("curve_bin_probabilities: empty curve");
  std::vector<double> p(static_cast<std::size_t>(bins), 0.0);
  for (const auto& [x, eta] : curve) {
    auto k = static_cast<int>(x * bins);
    k = std::clamp(k, 0, bins - 1);
    p[static_cast<std::size_t>(k)] += 1.0;
  }
  for (double& v : p) v /= static_cast<double>(curve.size());
  return p;
}

HaarReferenceKind parse_haar_reference_kind(std::string_view name) {
  for (auto k : {HaarReferenceKind::page_entropy, HaarReferenceKind::renyi_page,
                 HaarReferenceKind::mp_curve, HaarReferenceKind::capacity,
                 HaarReferenceKind::log_antiflatness, HaarReferenceKind::sre_scaling})
    if (to_string(k) == name) return k;
  throw ArgumentError("unknown Haar reference '" + std::string(name) + "'");
}

std::string_view to_string(HaarReferenceKind kind) {
  switch (kind) {
    case HaarReferenceKind::page_entropy: return "page_entropy";
    case HaarReferenceKind::renyi_page: return "renyi_page";
    case HaarReferenceKind::mp_curve: return "mp_curve";
    case HaarReferenceKind::capacity: return "capacity";
    case HaarReferenceKind::log_antiflatness: return "log_antiflatness";
    case HaarReferenceKind::sre_scaling: return "sre_scaling";
  }
  return "unknown";
}

double haar_reference(const HaarReference& ref) {
  switch (ref.kind) {
    case HaarReferenceKind::page_entropy:
      if (!(ref.f >= 0.0 && ref.f <= 1.0)) throw ArgumentError("page_entropy: f outside [0, 1]");
      return 2.0 * std::min(ref.f, 1.0 - ref.f);
    case HaarReferenceKind::renyi_page: {
      const int n = ref.n_qubits, r = ref.subsystem_size, a = ref.alpha;
      if (a < 2) throw ArgumentError("renyi_page: alpha must be an integer >= 2");
      if (r < 1 || r >= n) throw ArgumentError("renyi_page: subsystem size out of range");
      // ln[2^{n - r(1+a)} sum_k H(a,k) 2^{(2r-n)k}] / (1 - a), log-sum-exp.
      std::vector<double> logs;
      for (int k = 1; k <= a; ++k) {
        const double narayana = binomial(a, k) * binomial(a, k - 1) / a;
        logs.push_back(std::log(narayana) + (2.0 * r - n) * k * std::numbers::ln2);
      }
      const double mx = *std::max_element(logs.begin(), logs.end());
      double acc = 0.0;
      for (double l : logs) acc += std::exp(l - mx);
      const double log_trace = (n - r * (1.0 + a)) * std::numbers::ln2 + mx + std::log(acc);
      return log_trace / (1.0 - a);
    }
    case HaarReferenceKind::mp_curve: return marchenko_pastur_eta(ref.x);
    case HaarReferenceKind::capacity: return 11.0 / 4.0 - std::numbers::pi * std::numbers::pi / 3.0;
    case HaarReferenceKind::log_antiflatness: return std::log(5.0 / 4.0);
    case HaarReferenceKind::sre_scaling:
      if (ref.n_qubits < 1) throw ArgumentError("sre_scaling: qubit count must be positive");
      return -2.0 + ref.n_qubits;
  }
  throw ArgumentError("haar_reference: unknown kind");
}

double page_entropy_exact(int n_qubits, int subsystem_size) {
  if (subsystem_size < 1 || subsystem_size >= n_qubits || n_qubits > 40)
    throw ArgumentError("page_entropy_exact: bad sizes");
  const int small = std::min(subsystem_size, n_qubits - subsystem_size);
  const double da = std::ldexp(1.0, small), db = std::ldexp(1.0, n_qubits - small);
  // sum_{k=db+1}^{da db} 1/k = H(da db) - H(db), via digamma-free asymptotics
  // when large and direct summation otherwise.
  auto harmonic = [](double m) {
    if (m < 1e6) {
      double s = 0.0;
      for (double k = m; k >= 1.0; k -= 1.0) s += 1.0 / k;
      return s;
    }
    const double inv = 1.0 / m;
    return std::log(m) + 0.57721566490153286 + 0.5 * inv - inv * inv / 12.0 +
           inv * inv * inv * inv / 120.0;
  };
  return harmonic(da * db) - harmonic(db) - (da - 1.0) / (2.0 * db);
}

namespace {

double kahan_series(double a, int m, double c, double z) {
  double sum = 1.0, comp = 0.0, term = 1.0;
  for (int k = 0; k < m; ++k) {
    term *= (a + k) * (-m + k) / ((c + k) * (k + 1.0)) * z;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

double hypergeometric_2f1_terminating(double a, int m, double c, double z) {
  if (m < 0) throw ArgumentError("hypergeometric_2f1_terminating: m must be >= 0");
  // Near z = 1 the direct series alternates with huge terms. Reflect instead:
  // 2F1(a,-m;c;z) = (c-a)_m/(c)_m 2F1(a,-m;a-c-m+1;1-z).
  const double c2 = a - c - m + 1.0;
  const bool pole = c2 <= 0.0 && c2 > -m && c2 == std::floor(c2);
  if (z <= 0.5 || pole) return kahan_series(a, m, c, z);
  double pre = 1.0;
  for (int k = 0; k < m; ++k) pre *= (c - a + k) / (c + k);
  return pre * kahan_series(a, m, c2, 1.0 - z);
}

double syk2_reference(Syk2ReferenceKind kind, int subsystem_size, double f) {
  if (!(f > 0.0 && f < 1.0)) throw ArgumentError("syk2_reference: f must lie in (0, 1)");
  const double r = subsystem_size;
  if (kind == Syk2ReferenceKind::mean_entropy) {
    const double k = 1.0 - (1.0 + (1.0 - f) / f * std::log(1.0 - f)) / std::numbers::ln2;
    return k * std::numbers::ln2 * r;
  }
  const double z = 4.0 * f * (1.0 - f);
  double sum = 0.0, comp = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double coef = (std::pow(0.5, n) - 0.5 * std::pow(0.75, n)) / n;
    const double term = coef * hypergeometric_2f1_terminating(0.5, n - 1, 2.0, z);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) < 1e-12 && n > 2) break;
  }
  return 2.0 * r * (1.0 - f) * sum;
}

}  // namespace syklab
