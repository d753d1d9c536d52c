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

#include "syklab/ess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "syklab/errors.hpp"
#include "syklab/fitting.hpp"

namespace syklab {

std::vector<double> HistogramPDF::probabilities() const {
  std::vector<double> p(densities.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = densities[i] * width(i);
  return p;
}

HistogramPDF make_histogram(std::span<const double> samples, std::size_t bins, double lo,
                            double hi) {
  if (bins < 1) throw ArgumentError("make_histogram: need at least one bin");
  if (!(hi > lo)) throw ArgumentError("make_histogram: empty range");
  HistogramPDF h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (double s : samples) {
    if (!(s >= lo && s <= hi)) {
      ++h.excluded;
      continue;
    }
    auto k = static_cast<std::size_t>((s - lo) / w);
    if (k >= bins) k = bins - 1;
    ++counts[k];
    ++h.n_samples;
  }
  if (h.n_samples == 0) throw DegenerateDataError("make_histogram: every sample was excluded");
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.densities[i] = static_cast<double>(counts[i]) / (static_cast<double>(h.n_samples) * h.width(i));
  return h;
}

ReferenceKind parse_reference_kind(std::string_view name) {
  for (auto k : {ReferenceKind::poisson, ReferenceKind::wd_goe, ReferenceKind::wd_gue,
                 ReferenceKind::wd_gse})
    if (to_string(k) == name) return k;
  throw ArgumentError("unknown reference distribution '" + std::string(name) + "'");
}

std::string_view to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::poisson: return "poisson";
    case ReferenceKind::wd_goe: return "wd_goe";
    case ReferenceKind::wd_gue: return "wd_gue";
    case ReferenceKind::wd_gse: return "wd_gse";
  }
  return "unknown";
}

namespace {

std::vector<double> nonzero_spacings(std::span<const double> ascending, double tol) {
  std::vector<double> s;
  for (std::size_t k = 1; k < ascending.size(); ++k) {
    const double d = ascending[k] - ascending[k - 1];
    if (d < -tol) throw ArgumentError("gap_ratios: input is not ascending");
    if (d > tol) s.push_back(d);
  }
  return s;
}

}  // namespace

std::vector<double> gap_ratios(std::span<const double> ascending, double degenerate_tol) {
  if (ascending.size() < 3) throw ArgumentError("gap_ratios: need at least three values");
  const auto s = nonzero_spacings(ascending, degenerate_tol);
  std::vector<double> r;
  for (std::size_t k = 1; k < s.size(); ++k) r.push_back(s[k] / s[k - 1]);
  return r;
}

std::vector<double> min_max_ratios(std::span<const double> ascending, double degenerate_tol) {
  if (ascending.size() < 3) throw ArgumentError("min_max_ratios: need at least three values");
  const auto s = nonzero_spacings(ascending, degenerate_tol);
  std::vector<double> r;
  for (std::size_t k = 1; k < s.size(); ++k)
    r.push_back(std::min(s[k], s[k - 1]) / std::max(s[k], s[k - 1]));
  return r;
}

double average_ratio(const std::vector<std::vector<double>>& spectra, double degenerate_tol) {
  if (spectra.empty()) throw ArgumentError("average_ratio: no spectra");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : spectra) {
    for (double r : min_max_ratios(s, degenerate_tol)) {
      sum += r;
      ++count;
    }
  }
  if (count == 0) throw DegenerateDataError("average_ratio: no usable spacings");
  return sum / static_cast<double>(count);
}

HistogramPDF ess_histogram(std::span<const double> ratios, std::size_t bins, double cutoff) {
  if (bins < 2) throw ArgumentError("ess_histogram: need at least two bins");
  if (!(cutoff > 0.0)) throw ArgumentError("ess_histogram: cutoff must be positive");
  return make_histogram(ratios, bins, 0.0, cutoff);
}

double reference_pdf(ReferenceKind kind, double r) {
  if (!(r >= 0.0)) throw ArgumentError("reference_pdf: r must be nonnegative");
  const double s3 = std::numbers::pi / std::sqrt(3.0);
  double beta, z;
  switch (kind) {
    case ReferenceKind::poisson: return 1.0 / ((1.0 + r) * (1.0 + r));
    case ReferenceKind::wd_goe: beta = 1.0; z = 8.0 / 27.0; break;
    case ReferenceKind::wd_gue: beta = 2.0; z = 4.0 / 81.0 * s3; break;
    case ReferenceKind::wd_gse: beta = 4.0; z = 4.0 / 729.0 * s3; break;
    default: throw ArgumentError("reference_pdf: unknown kind");
  }
  return std::pow(r + r * r, beta) / (z * std::pow(1.0 + r + r * r, 1.0 + 1.5 * beta));
}

double reference_mean_ratio(ReferenceKind kind) {
  const double s3 = std::sqrt(3.0) / std::numbers::pi;
  switch (kind) {
    case ReferenceKind::poisson: return 2.0 * std::numbers::ln2 - 1.0;
    case ReferenceKind::wd_goe: return 4.0 - 2.0 * std::sqrt(3.0);
    case ReferenceKind::wd_gue: return 2.0 * s3 - 0.5;
    case ReferenceKind::wd_gse: return 32.0 / 15.0 * s3 - 0.5;
  }
  throw ArgumentError("reference_mean_ratio: unknown kind");
}

std::vector<double> reference_bin_probabilities(ReferenceKind kind, const HistogramPDF& hist) {
  constexpr int kSub = 16;
  std::vector<double> q(hist.bins());
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double a = hist.bin_edges[i], w = hist.width(i) / kSub;
    double m = 0.0;
    for (int k = 0; k < kSub; ++k) m += reference_pdf(kind, a + (k + 0.5) * w) * w;
    q[i] = m;
    total += m;
  }
  for (double& v : q) v /= total;
  return q;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("kl_divergence: distributions differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw ArgumentError("kl_divergence: negative probability");
    if (p[i] == 0.0) continue;
    d += p[i] * (std::log(p[i]) - std::log(std::max(q[i], 1e-12)));
  }
  return d;
}

double kl_divergence(const HistogramPDF& p, ReferenceKind kind) {
  return kl_divergence(p.probabilities(), reference_bin_probabilities(kind, p));
}

std::vector<FidelityPoint> kl_fidelity_scan(const std::map<double, std::vector<double>>& curves,
                                            double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("kl_fidelity_scan: epsilon must be positive");
  if (curves.size() < 2) throw ArgumentError("kl_fidelity_scan: need at least two grid points");
  const std::size_t len = curves.begin()->second.size();
  double spacing = std::numeric_limits<double>::max();
  for (auto it = std::next(curves.begin()); it != curves.end(); ++it)
    spacing = std::min(spacing, it->first - std::prev(it)->first);
  const double steps = epsilon / spacing;
  if (std::abs(steps - std::round(steps)) > 1e-6 || std::round(steps) < 1.0)
    throw ArgumentError("kl_fidelity_scan: grid spacing does not divide epsilon");

  auto normalized = [len](const std::vector<double>& v) {
    if (v.size() != len) throw DimensionError("kl_fidelity_scan: curves differ in length");
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(total > 0.0)) throw ArgumentError("kl_fidelity_scan: curve has no mass");
    std::vector<double> out(v);
    for (double& x : out) x /= total;
    return out;
  };
  const double tol = 1e-6 * spacing;
  std::vector<FidelityPoint> out;
  for (const auto& [g, curve] : curves) {
    const auto partner = curves.lower_bound(g + epsilon - tol);
    if (partner == curves.end() || std::abs(partner->first - (g + epsilon)) > tol) continue;
    out.push_back({g, kl_divergence(normalized(curve), normalized(partner->second))});
  }
  if (out.empty()) throw ArgumentError("kl_fidelity_scan: no grid point has a partner at g+eps");
  return out;
}

std::vector<FidelityPoint> rescale_fidelity(std::vector<FidelityPoint> curve) {
  double peak = 0.0;
  for (const auto& p : curve) peak = std::max(peak, p.divergence);
  if (peak > 0.0)
    for (auto& p : curve) p.divergence /= peak;
  return curve;
}

TransitionEstimate transition_point(const std::vector<FidelityPoint>& curve, int poly_degree) {
  if (curve.size() < static_cast<std::size_t>(poly_degree) + 2)
    throw ArgumentError("transition_point: too few points for the polynomial degree");
  std::vector<double> xs, ys;
  for (const auto& p : curve) {
    xs.push_back(p.g);
    ys.push_back(p.divergence);
  }
  const PeakResult peak = polynomial_peak(xs, ys, poly_degree);
  return {peak.location, peak.at_boundary};
}

}  // namespace syklab
