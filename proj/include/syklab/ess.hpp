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

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace syklab {

/// Normalized histogram: sum(density * width) == 1.
struct HistogramPDF {
  std::vector<double> bin_edges;  // ascending, size bins+1
  std::vector<double> densities;
  std::size_t n_samples = 0;      // samples that landed in a bin
  std::size_t excluded = 0;       // samples outside [lo, hi]

  std::size_t bins() const { return densities.size(); }
  double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
  /// Probability mass per bin.
  std::vector<double> probabilities() const;
};

/// Equal-width histogram of `samples` on [lo, hi]; samples outside are
/// counted in `excluded`. Throws DegenerateDataError if nothing lands.
HistogramPDF make_histogram(std::span<const double> samples, std::size_t bins, double lo,
                            double hi);

enum class ReferenceKind { poisson, wd_goe, wd_gue, wd_gse };

ReferenceKind parse_reference_kind(std::string_view name);
std::string_view to_string(ReferenceKind kind);

/// Consecutive-spacing ratios r_k = s_k / s_{k-1} of an ascending sequence.
/// Spacings below `degenerate_tol` are dropped first.
std::vector<double> gap_ratios(std::span<const double> ascending, double degenerate_tol = 1e-12);

/// <min(s_k, s_{k+1}) / max(s_k, s_{k+1})> over all levels of all spectra.
double average_ratio(const std::vector<std::vector<double>>& spectra,
                     double degenerate_tol = 1e-12);

/// Per-ratio min/max values, pooled in input order.
std::vector<double> min_max_ratios(std::span<const double> ascending,
                                   double degenerate_tol = 1e-12);

/// Histogram on [0, cutoff] with the given bin count; ratios above the cutoff
/// are excluded.
HistogramPDF ess_histogram(std::span<const double> ratios, std::size_t bins = 100,
                           double cutoff = 10.0);

/// Gap-ratio density P(r).
double reference_pdf(ReferenceKind kind, double r);

/// Mean min/max ratio of the reference ensemble.
double reference_mean_ratio(ReferenceKind kind);

/// Reference mass per bin of `hist`, each bin integrated with a 16-point
/// midpoint rule and the result renormalized to unit mass on the histogram
/// support (the data side excludes the tail, so the reference does too).
std::vector<double> reference_bin_probabilities(ReferenceKind kind, const HistogramPDF& hist);

/// D_KL(p || q) = sum p_i (ln p_i - ln q_i). Bins with p_i = 0 contribute 0;
/// q_i = 0 where p_i > 0 is clamped to 1e-12.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// KL of a histogram against a reference ensemble on the same bins.
double kl_divergence(const HistogramPDF& p, ReferenceKind kind);

/// One point of a fidelity scan.
struct FidelityPoint {
  double g;
  double divergence;
};

/// D_KL(eta_g || eta_{g+eps}) for every grid point g whose partner g+eps is
/// also on the grid. Each value in `curves` is a discrete distribution
/// (e.g. the averaged descending RDM spectrum); all must share a length.
std::vector<FidelityPoint> kl_fidelity_scan(const std::map<double, std::vector<double>>& curves,
                                            double epsilon);

/// Divides every divergence by the curve maximum (no-op for an all-zero curve).
std::vector<FidelityPoint> rescale_fidelity(std::vector<FidelityPoint> curve);

struct TransitionEstimate {
  double g_c = 0.0;
  bool at_boundary = false;
};

/// Peak of a degree-`poly_degree` least-squares polynomial through the curve.
TransitionEstimate transition_point(const std::vector<FidelityPoint>& curve, int poly_degree = 10);

}  // namespace syklab
