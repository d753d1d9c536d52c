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

#include <cmath>
#include <random>

#include "syklab/errors.hpp"
#include "syklab/fitting.hpp"

using namespace syklab;

namespace {

std::vector<double> range(double lo, double step, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo + step * i);
  return v;
}

template <class F>
std::vector<double> eval(const std::vector<double>& xs, F f, double noise = 0.0, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(f(x) * (1.0 + noise * n(rng)));
  return ys;
}

}  // namespace

TEST_CASE("linear fit") {
  const auto xs = range(0.0, 0.5, 8);
  const auto fit = linear_fit(xs, eval(xs, [](double x) { return 2 + 3 * x; }));
  CHECK(fit["a"] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit["b"] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.residual_norm < 1e-12);
  CHECK(fit.r_squared == doctest::Approx(1.0));

  // Affine rescaling x -> 2x + 1 maps (a, b) to (a - b/2, b/2).
  std::vector<double> xs2;
  for (double x : xs) xs2.push_back(2 * x + 1);
  const auto ys = eval(xs, [](double x) { return 1 - 0.7 * x; }, 0.05, 3);
  const auto f1 = linear_fit(xs, ys), f2 = linear_fit(xs2, ys);
  CHECK(f2["b"] == doctest::Approx(f1["b"] / 2));
  CHECK(f2["a"] == doctest::Approx(f1["a"] - f1["b"] / 2));
  CHECK(f1.error("a") > 0.0);

  const std::vector<double> same{1, 1, 1}, ys3{1, 2, 3};
  CHECK_THROWS_AS(linear_fit(same, ys3), RankError);
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(linear_fit(two, two), ArgumentError);
  CHECK_THROWS_AS(fit["zz"], ArgumentError);
}

TEST_CASE("power-law fit") {
  const auto xs = range(10.0, 2.0, 8);
  const auto fit = power_law_fit(xs, eval(xs, [](double x) { return 5.0 / x; }));
  CHECK(fit["p"] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit["c"] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(fit.predict(4.0) == doctest::Approx(1.25));

  const auto noisy = eval(xs, [](double x) { return std::pow(x, -0.78); }, 0.01, 7);
  const auto nf = power_law_fit(xs, noisy);
  CHECK(std::abs(nf["p"] + 0.78) < 0.078);
  std::vector<double> scaled;
  for (double x : xs) scaled.push_back(3.0 * x);
  CHECK(power_law_fit(scaled, noisy)["p"] == doctest::Approx(nf["p"]));

  std::vector<double> bad = eval(xs, [](double) { return 1.0; });
  bad[2] = 0.0;
  CHECK_THROWS_AS(power_law_fit(xs, bad), ArgumentError);
}

TEST_CASE("saturating exponentials") {
  const auto ns = range(4.0, 4.0, 16);
  for (auto [a, b] : {std::pair{0.49, 0.084}, std::pair{0.3, 0.2}}) {
    const auto fit = saturating_exponential_fit(
        ns, eval(ns, [&](double x) { return 1 - a * std::exp(-b * x); }), FitModel::one_minus_a_exp);
    CHECK(fit.converged);
    CHECK(fit["a"] == doctest::Approx(a).epsilon(1e-7));
    CHECK(fit["b"] == doctest::Approx(b).epsilon(1e-7));
    CHECK(fit.residual_norm < 1e-9);
    const auto noisy = saturating_exponential_fit(
        ns, eval(ns, [&](double x) { return 1 - a * std::exp(-b * x); }, 0.01, 11), FitModel::one_minus_a_exp);
    CHECK(std::abs(noisy["a"] / a - 1) < 0.1);
    CHECK(std::abs(noisy["b"] / b - 1) < 0.1);
  }

  const auto xs = range(0.0, 5.0, 12);
  const auto fit = saturating_exponential_fit(
      xs, eval(xs, [](double x) { return 0.57 * (1 - std::exp(-0.036 * x)); }), FitModel::a_times_one_minus_exp);
  CHECK(fit["a"] == doctest::Approx(0.57).epsilon(1e-7));
  CHECK(fit["b"] == doctest::Approx(0.036).epsilon(1e-7));
  const auto noisy = saturating_exponential_fit(
      xs, eval(xs, [](double x) { return 0.57 * (1 - std::exp(-0.036 * x)); }, 0.01, 5),
      FitModel::a_times_one_minus_exp);
  CHECK(std::abs(noisy["a"] / 0.57 - 1) < 0.1);
  CHECK(std::abs(noisy["b"] / 0.036 - 1) < 0.1);

  const auto flat = saturating_exponential_fit(ns, eval(ns, [](double) { return 1.0; }), FitModel::one_minus_a_exp);
  CHECK(flat.degenerate);
  CHECK_THROWS_AS(saturating_exponential_fit(ns, ns, FitModel::linear), ArgumentError);
  CHECK_THROWS_AS(saturating_exponential_fit(range(1, 1, 3), range(1, 1, 3), FitModel::one_minus_a_exp),
                  ArgumentError);
}

TEST_CASE("polynomial peaks") {
  const auto xs = range(0.0, 0.05, 21);
  const auto quad = polynomial_peak(xs, eval(xs, [](double x) { return 1 - (x - 0.3) * (x - 0.3); }), 2);
  CHECK(std::abs(quad.location - 0.3) < 1e-10);
  CHECK_FALSE(quad.at_boundary);

  const auto noisy = polynomial_peak(
      xs, eval(xs, [](double x) { return std::exp(-(x - 0.42) * (x - 0.42) / 0.03); }, 0.01, 2), 10);
  CHECK(std::abs(noisy.location - 0.42) < 0.1);
  CHECK_FALSE(noisy.at_boundary);

  CHECK(polynomial_peak(xs, xs, 3).at_boundary);
  CHECK_THROWS(polynomial_peak(range(0, 0.1, 10), range(0, 0.1, 10), 10));
  CHECK_THROWS_AS(polynomial_peak(std::vector<double>(21, 1.0), xs, 3), RankError);
}

TEST_CASE("bootstrap and JSON") {
  const auto xs = range(0.0, 1.0, 20);
  const auto ys = eval(xs, [](double x) { return 1 + 2 * x; }, 0.02, 9);
  const auto errs = bootstrap_std_errors(linear_fit, xs, ys, 200, 4);
  REQUIRE(errs.size() == 2);
  const auto fit = linear_fit(xs, ys);
  CHECK(errs[1] > 0.2 * fit.error("b"));
  CHECK(errs[1] < 5.0 * fit.error("b"));
  CHECK(bootstrap_std_errors(linear_fit, xs, ys, 200, 4) == errs);

  const std::string j = to_json(fit);
  CHECK(j.find("\"model\"") != std::string::npos);
  CHECK(j.find("\"linear\"") != std::string::npos);
  CHECK(parse_fit_model(to_string(FitModel::power_law)) == FitModel::power_law);
  CHECK_THROWS_AS(parse_fit_model("spline"), ArgumentError);
}
