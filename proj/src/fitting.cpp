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

#include "syklab/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "syklab/errors.hpp"

namespace syklab {

namespace {

void check_sizes(std::span<const double> xs, std::span<const double> ys, std::size_t min_points,
                 const char* who) {
  if (xs.size() != ys.size()) throw DimensionError(std::string(who) + ": xs and ys differ in length");
  if (xs.size() < min_points)
    throw ArgumentError(std::string(who) + ": needs at least " + std::to_string(min_points) +
                        " points");
}

double total_sum_squares(std::span<const double> ys) {
  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double tss = 0.0;
  for (double y : ys) tss += (y - mean) * (y - mean);
  return tss;
}

void finish_goodness(FitResult& fit, std::span<const double> xs, std::span<const double> ys) {
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.predict(xs[i]);
    rss += r * r;
  }
  fit.residual_norm = std::sqrt(rss);
  const double tss = total_sum_squares(ys);
  fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : (rss == 0.0 ? 1.0 : 0.0);
}

// P_0..P_degree at t, and their derivatives.
void legendre(double t, int degree, double* p, double* dp) {
  p[0] = 1.0;
  if (dp) dp[0] = 0.0;
  if (degree == 0) return;
  p[1] = t;
  if (dp) dp[1] = 1.0;
  for (int k = 1; k < degree; ++k) {
    p[k + 1] = ((2.0 * k + 1.0) * t * p[k] - k * p[k - 1]) / (k + 1.0);
    if (dp) dp[k + 1] = dp[k - 1] + (2.0 * k + 1.0) * p[k];
  }
}

double to_unit_interval(const FitResult& fit, double x) {
  const double span = fit.domain_hi - fit.domain_lo;
  return span > 0.0 ? 2.0 * (x - fit.domain_lo) / span - 1.0 : 0.0;
}

double poly_eval(const FitResult& fit, double t, double* slope = nullptr) {
  const int degree = static_cast<int>(fit.parameters.size()) - 1;
  std::vector<double> p(static_cast<std::size_t>(degree + 1)), dp(p.size());
  legendre(t, degree, p.data(), dp.data());
  double v = 0.0, d = 0.0;
  for (int k = 0; k <= degree; ++k) {
    v += fit.parameters[static_cast<std::size_t>(k)].value * p[static_cast<std::size_t>(k)];
    d += fit.parameters[static_cast<std::size_t>(k)].value * dp[static_cast<std::size_t>(k)];
  }
  if (slope) *slope = d;
  return v;
}

double model_value(FitModel model, double a, double b, double x) {
  switch (model) {
    case FitModel::one_minus_a_exp: return 1.0 - a * std::exp(-b * x);
    case FitModel::a_times_one_minus_exp: return a * (1.0 - std::exp(-b * x));
    default: throw ArgumentError("model_value: not a saturating-exponential model");
  }
}

// Minimizes f over R^2 with the Nelder-Mead simplex.
std::array<double, 3> nelder_mead(const std::function<double(double, double)>& f,
                                  std::array<double, 2> start, std::array<double, 2> step,
                                  double tol, int max_iter, bool& converged) {
  using Pt = std::array<double, 3>;  // (u, v, f)
  std::array<Pt, 3> s{Pt{start[0], start[1], 0}, Pt{start[0] + step[0], start[1], 0},
                      Pt{start[0], start[1] + step[1], 0}};
  for (auto& p : s) p[2] = f(p[0], p[1]);
  converged = false;
  for (int it = 0; it < max_iter; ++it) {
    std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a[2] < b[2]; });
    const double spread = std::abs(s[2][2] - s[0][2]);
    const double size = std::max({std::abs(s[1][0] - s[0][0]), std::abs(s[2][0] - s[0][0]),
                                  std::abs(s[1][1] - s[0][1]), std::abs(s[2][1] - s[0][1])});
    if (spread <= tol * (std::abs(s[0][2]) + tol) && size <= tol * (1.0 + std::abs(s[0][0]) + std::abs(s[0][1]))) {
      converged = true;
      break;
    }
    const double cu = 0.5 * (s[0][0] + s[1][0]), cv = 0.5 * (s[0][1] + s[1][1]);
    auto at = [&](double coef) {
      Pt p{cu + coef * (s[2][0] - cu), cv + coef * (s[2][1] - cv), 0};
      p[2] = f(p[0], p[1]);
      return p;
    };
    const Pt r = at(-1.0);
    if (r[2] < s[0][2]) {
      const Pt e = at(-2.0);
      s[2] = e[2] < r[2] ? e : r;
    } else if (r[2] < s[1][2]) {
      s[2] = r;
    } else {
      const Pt c = r[2] < s[2][2] ? at(-0.5) : at(0.5);
      if (c[2] < std::min(r[2], s[2][2])) {
        s[2] = c;
      } else {
        for (int k = 1; k < 3; ++k) {
          s[k][0] = s[0][0] + 0.5 * (s[k][0] - s[0][0]);
          s[k][1] = s[0][1] + 0.5 * (s[k][1] - s[0][1]);
          s[k][2] = f(s[k][0], s[k][1]);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a[2] < b[2]; });
  return s[0];
}

}  // namespace

std::string_view to_string(FitModel model) {
  switch (model) {
    case FitModel::linear: return "linear";
    case FitModel::power_law: return "power_law";
    case FitModel::one_minus_a_exp: return "one_minus_a_exp";
    case FitModel::a_times_one_minus_exp: return "a_times_one_minus_exp";
    case FitModel::polynomial: return "polynomial";
  }
  return "unknown";
}

FitModel parse_fit_model(std::string_view name) {
  for (auto m : {FitModel::linear, FitModel::power_law, FitModel::one_minus_a_exp,
                 FitModel::a_times_one_minus_exp, FitModel::polynomial})
    if (to_string(m) == name) return m;
  throw ArgumentError("unknown fit model '" + std::string(name) + "'");
}

double FitResult::operator[](std::string_view name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p.value;
  throw ArgumentError("FitResult: no parameter '" + std::string(name) + "'");
}

double FitResult::error(std::string_view name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p.std_error;
  throw ArgumentError("FitResult: no parameter '" + std::string(name) + "'");
}

double FitResult::predict(double x) const {
  switch (model) {
    case FitModel::linear: return parameters[0].value + parameters[1].value * x;
    case FitModel::power_law: return parameters[0].value * std::pow(x, parameters[1].value);
    case FitModel::one_minus_a_exp:
    case FitModel::a_times_one_minus_exp:
      return model_value(model, parameters[0].value, parameters[1].value, x);
    case FitModel::polynomial: return poly_eval(*this, to_unit_interval(*this, x));
  }
  return 0.0;
}

std::string to_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["model"] = std::string(to_string(fit.model));
  for (const auto& p : fit.parameters) {
    j["parameters"][p.name] = p.value;
    j["std_errors"][p.name] = p.std_error;
  }
  j["residual_norm"] = fit.residual_norm;
  j["r_squared"] = fit.r_squared;
  j["converged"] = fit.converged;
  j["degenerate"] = fit.degenerate;
  if (fit.model == FitModel::polynomial) j["domain"] = {fit.domain_lo, fit.domain_hi};
  return j.dump();
}

FitResult linear_fit(std::span<const double> xs, std::span<const double> ys) {
  check_sizes(xs, ys, 3, "linear_fit");
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  double spread = 0.0;
  for (double x : xs) spread = std::max(spread, std::abs(x - mx));
  if (sxx <= 1e-28 * std::max(1.0, mx * mx) * n || spread == 0.0)
    throw RankError("linear_fit: all x values coincide");
  const double b = sxy / sxx;
  const double a = my - b * mx;
  FitResult fit;
  fit.model = FitModel::linear;
  fit.parameters = {{"a", a, 0.0}, {"b", b, 0.0}};
  finish_goodness(fit, xs, ys);
  const double s2 = fit.residual_norm * fit.residual_norm / (n - 2.0);
  fit.parameters[1].std_error = std::sqrt(s2 / sxx);
  fit.parameters[0].std_error = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return fit;
}

FitResult power_law_fit(std::span<const double> xs, std::span<const double> ys) {
  check_sizes(xs, ys, 3, "power_law_fit");
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw ArgumentError("power_law_fit: data must be strictly positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const FitResult lin = linear_fit(lx, ly);
  FitResult fit;
  fit.model = FitModel::power_law;
  const double c = std::exp(lin["a"]);
  fit.parameters = {{"c", c, c * lin.error("a")}, {"p", lin["b"], lin.error("b")}};
  finish_goodness(fit, xs, ys);
  return fit;
}

FitResult saturating_exponential_fit(std::span<const double> xs, std::span<const double> ys,
                                     FitModel model) {
  if (model != FitModel::one_minus_a_exp && model != FitModel::a_times_one_minus_exp)
    throw ArgumentError("saturating_exponential_fit: unsupported model");
  check_sizes(xs, ys, 4, "saturating_exponential_fit");
  double xmax = 0.0, yscale = 0.0;
  for (double x : xs) xmax = std::max(xmax, std::abs(x));
  for (double y : ys) yscale = std::max(yscale, std::abs(y));
  if (xmax == 0.0) throw RankError("saturating_exponential_fit: all x are zero");

  auto rss = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - model_value(model, a, b, xs[i]);
      s += r * r;
    }
    return std::isfinite(s) ? s : std::numeric_limits<double>::max();
  };
  // Model is linear in a for fixed b; the range of those conditional optima
  // sets the a-axis of the grid.
  auto best_a = [&](double b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = std::exp(-b * xs[i]);
      const double basis = model == FitModel::one_minus_a_exp ? -e : 1.0 - e;
      const double target = model == FitModel::one_minus_a_exp ? ys[i] - 1.0 : ys[i];
      num += basis * target;
      den += basis * basis;
    }
    return den > 0.0 ? num / den : 0.0;
  };
  constexpr int kGrid = 32;
  std::array<double, kGrid> bs{};
  const double lb_lo = std::log(1e-3 / xmax), lb_hi = std::log(1e2 / xmax);
  double a_lo = std::numeric_limits<double>::max(), a_hi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < kGrid; ++i) {
    bs[static_cast<std::size_t>(i)] = std::exp(lb_lo + (lb_hi - lb_lo) * i / (kGrid - 1));
    const double a = best_a(bs[static_cast<std::size_t>(i)]);
    if (std::isfinite(a) && std::abs(a) < 1e6 * (1.0 + yscale)) {
      a_lo = std::min(a_lo, a);
      a_hi = std::max(a_hi, a);
    }
  }
  if (a_lo > a_hi) a_lo = a_hi = 0.0;
  const double pad = 0.25 * (a_hi - a_lo) + 1e-3 * (1.0 + yscale);
  a_lo -= pad;
  a_hi += pad;

  struct Cand {
    double f, a, lb;
  };
  std::vector<Cand> grid;
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) {
      const double a = a_lo + (a_hi - a_lo) * j / (kGrid - 1);
      grid.push_back({rss(a, bs[static_cast<std::size_t>(i)]), a, std::log(bs[static_cast<std::size_t>(i)])});
    }
  std::sort(grid.begin(), grid.end(), [](const Cand& x, const Cand& y) { return x.f < y.f; });

  auto objective = [&](double a, double lb) { return rss(a, std::exp(lb)); };
  const double step_a = (a_hi - a_lo) / (kGrid - 1);
  const double step_lb = (lb_hi - lb_lo) / (kGrid - 1);
  std::array<double, 3> best{grid[0].a, grid[0].lb, grid[0].f};
  bool converged = false;
  for (std::size_t k = 0; k < std::min<std::size_t>(4, grid.size()); ++k) {
    bool ok = false;
    auto r = nelder_mead(objective, {grid[k].a, grid[k].lb}, {step_a, step_lb}, 1e-10, 20000, ok);
    // Polish from the result with a fresh, smaller simplex.
    r = nelder_mead(objective, {r[0], r[1]}, {0.01 * step_a, 0.01 * step_lb}, 1e-12, 20000, ok);
    if (r[2] <= best[2]) {
      best = r;
      converged = ok;
    }
  }

  FitResult fit;
  fit.model = model;
  const double a = best[0], b = std::exp(best[1]);
  fit.parameters = {{"a", a, 0.0}, {"b", b, 0.0}};
  fit.converged = converged;
  finish_goodness(fit, xs, ys);

  // Jacobian covariance with a relative finite-difference step of 1e-6.
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd jac(n, 2);
  const std::array<double, 2> theta{a, b};
  for (int p = 0; p < 2; ++p) {
    const double h = 1e-6 * std::max(std::abs(theta[static_cast<std::size_t>(p)]), 1e-8);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = xs[static_cast<std::size_t>(i)];
      const double up = p == 0 ? model_value(model, a + h, b, x) : model_value(model, a, b + h, x);
      const double dn = p == 0 ? model_value(model, a - h, b, x) : model_value(model, a, b - h, x);
      jac(i, p) = (up - dn) / (2.0 * h);
    }
  }
  const Eigen::Matrix2d jtj = jac.transpose() * jac;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(jtj);
  const double lam_max = es.eigenvalues().maxCoeff();
  const double lam_min = es.eigenvalues().minCoeff();
  const bool amplitude_vanishes = std::abs(a) <= 1e-8 * (1.0 + yscale);
  if (amplitude_vanishes || lam_max <= 0.0 || lam_min <= 1e-12 * lam_max) {
    fit.degenerate = true;
    fit.parameters[0].std_error = fit.parameters[1].std_error =
        std::numeric_limits<double>::infinity();
    return fit;
  }
  const double dof = std::max<double>(static_cast<double>(n) - 2.0, 1.0);
  const double s2 = fit.residual_norm * fit.residual_norm / dof;
  const Eigen::Matrix2d cov = s2 * jtj.inverse();
  fit.parameters[0].std_error = std::sqrt(std::max(cov(0, 0), 0.0));
  fit.parameters[1].std_error = std::sqrt(std::max(cov(1, 1), 0.0));
  return fit;
}

PeakResult polynomial_peak(std::span<const double> xs, std::span<const double> ys, int degree) {
  if (degree < 1) throw ArgumentError("polynomial_peak: degree must be positive");
  check_sizes(xs, ys, static_cast<std::size_t>(degree) + 2, "polynomial_peak");
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  FitResult fit;
  fit.model = FitModel::polynomial;
  fit.domain_lo = *lo_it;
  fit.domain_hi = *hi_it;
  if (!(fit.domain_hi > fit.domain_lo)) throw RankError("polynomial_peak: all x coincide");

  const auto n = static_cast<Eigen::Index>(xs.size());
  const Eigen::Index m = degree + 1;
  Eigen::MatrixXd design(n, m);
  Eigen::VectorXd rhs(n);
  std::vector<double> p(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    legendre(to_unit_interval(fit, xs[static_cast<std::size_t>(i)]), degree, p.data(), nullptr);
    for (Eigen::Index k = 0; k < m; ++k) design(i, k) = p[static_cast<std::size_t>(k)];
    rhs[i] = ys[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < m) throw RankError("polynomial_peak: design matrix is rank deficient");
  const Eigen::VectorXd coef = qr.solve(rhs);
  for (Eigen::Index k = 0; k < m; ++k)
    fit.parameters.push_back({"c" + std::to_string(k), coef[k], 0.0});
  finish_goodness(fit, xs, ys);
  if (n > m) {
    const double s2 = fit.residual_norm * fit.residual_norm / static_cast<double>(n - m);
    const Eigen::MatrixXd cov = s2 * (design.transpose() * design).inverse();
    for (Eigen::Index k = 0; k < m; ++k)
      fit.parameters[static_cast<std::size_t>(k)].std_error = std::sqrt(std::max(cov(k, k), 0.0));
  }

  // Coarse scan on [-1, 1], then bisection on the derivative.
  constexpr int kScan = 4001;
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double v = poly_eval(fit, -1.0 + 2.0 * i / (kScan - 1));
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  PeakResult out;
  double t = -1.0 + 2.0 * best / (kScan - 1);
  if (best == 0 || best == kScan - 1) {
    out.at_boundary = true;
  } else {
    double lo = -1.0 + 2.0 * (best - 1) / (kScan - 1);
    double hi = -1.0 + 2.0 * (best + 1) / (kScan - 1);
    double d_lo = 0.0, d_hi = 0.0;
    poly_eval(fit, lo, &d_lo);
    poly_eval(fit, hi, &d_hi);
    if (d_lo >= 0.0 && d_hi <= 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        double d = 0.0;
        poly_eval(fit, mid, &d);
        (d > 0.0 ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
    }
  }
  out.location = fit.domain_lo + 0.5 * (t + 1.0) * (fit.domain_hi - fit.domain_lo);
  out.value = poly_eval(fit, t);
  out.fit = std::move(fit);
  return out;
}

std::vector<double> bootstrap_std_errors(const Fitter& fit, std::span<const double> xs,
                                         std::span<const double> ys, int resamples,
                                         std::uint64_t seed) {
  if (resamples < 2) throw ArgumentError("bootstrap_std_errors: need at least 2 resamples");
  check_sizes(xs, ys, 3, "bootstrap_std_errors");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  std::vector<std::vector<double>> draws;
  std::vector<double> bx(xs.size()), by(ys.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t k = pick(rng);
      bx[i] = xs[k];
      by[i] = ys[k];
    }
    try {
      const FitResult f = fit(bx, by);
      std::vector<double> v;
      for (const auto& p : f.parameters) v.push_back(p.value);
      draws.push_back(std::move(v));
    } catch (const std::exception&) {
      // Resamples with too few distinct x are skipped.
    }
  }
  if (draws.size() < 2) throw DegenerateDataError("bootstrap_std_errors: no usable resamples");
  const std::size_t k = draws.front().size();
  std::vector<double> out(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double mean = 0.0;
    for (const auto& d : draws) mean += d[j];
    mean /= static_cast<double>(draws.size());
    double var = 0.0;
    for (const auto& d : draws) var += (d[j] - mean) * (d[j] - mean);
    out[j] = std::sqrt(var / static_cast<double>(draws.size() - 1));
  }
  return out;
}

}  // namespace syklab
