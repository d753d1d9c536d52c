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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace syklab {

enum class FitModel {
  linear,                 // a + b x
  power_law,              // c x^p
  one_minus_a_exp,        // 1 - a exp(-b x)
  a_times_one_minus_exp,  // a (1 - exp(-b x))
  polynomial,             // Legendre series on x rescaled to [-1, 1]
};

std::string_view to_string(FitModel model);
FitModel parse_fit_model(std::string_view name);

struct FitParameter {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct FitResult {
  FitModel model = FitModel::linear;
  std::vector<FitParameter> parameters;
  double residual_norm = 0.0;
  double r_squared = 0.0;
  bool converged = true;
  /// Set when a parameter is not identifiable from the data.
  bool degenerate = false;
  /// Polynomial fits only: the x interval mapped onto [-1, 1].
  double domain_lo = 0.0;
  double domain_hi = 0.0;

  /// Value of the named parameter; throws ArgumentError if absent.
  double operator[](std::string_view name) const;
  double error(std::string_view name) const;
  /// Evaluates the fitted model.
  double predict(double x) const;
};

/// JSON object with model, parameters, errors and diagnostics.
std::string to_json(const FitResult& fit);

/// Ordinary least squares y = a + b x. Needs >= 3 points; RankError when all
/// x coincide.
FitResult linear_fit(std::span<const double> xs, std::span<const double> ys);

/// y = c x^p by regression in log-log space; ArgumentError for data <= 0.
FitResult power_law_fit(std::span<const double> xs, std::span<const double> ys);

/// Nonlinear least squares for the two saturating-exponential models: a
/// 32x32 grid over (a, b) with b log-spaced, then Nelder-Mead from the best
/// grid points in (a, ln b). Errors come from the finite-difference Jacobian
/// covariance at the optimum.
FitResult saturating_exponential_fit(std::span<const double> xs, std::span<const double> ys,
                                     FitModel model);

struct PeakResult {
  double location = 0.0;
  double value = 0.0;
  bool at_boundary = false;
  FitResult fit;
};

/// Least-squares polynomial of the given degree (Legendre basis on the
/// rescaled domain) and the location of its maximum on [min x, max x].
/// Needs more than degree + 1 points.
PeakResult polynomial_peak(std::span<const double> xs, std::span<const double> ys, int degree = 10);

using Fitter = std::function<FitResult(std::span<const double>, std::span<const double>)>;

/// Standard deviation of each parameter over bootstrap resamples of the data.
std::vector<double> bootstrap_std_errors(const Fitter& fit, std::span<const double> xs,
                                         std::span<const double> ys, int resamples,
                                         std::uint64_t seed);

}  // namespace syklab
