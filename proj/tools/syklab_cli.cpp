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

// syklab command line: build, run, merge, report, fit, references, selftest.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "syklab/entanglement.hpp"
#include "syklab/errors.hpp"
#include "syklab/ess.hpp"
#include "syklab/fitting.hpp"
#include "syklab/haar.hpp"
#include "syklab/runner.hpp"
#include "syklab/spectral.hpp"
#include "syklab/sre.hpp"
#include "syklab/syk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace syklab;

namespace {

constexpr const char* kOutputEnv = "SYKLAB_OUTPUT_DIR";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

// "0.3" or "start:stop:step".
GGrid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    const double g = std::stod(parts[0]);
    return {g, g, 1.0};
  }
  if (parts.size() != 3) throw ArgumentError("--g expects a value or start:stop:step");
  return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
}

json references() {
  json j;
  j["r_mean"] = {{"poisson", reference_mean_ratio(ReferenceKind::poisson)},
                 {"wd_goe", reference_mean_ratio(ReferenceKind::wd_goe)},
                 {"wd_gue", reference_mean_ratio(ReferenceKind::wd_gue)},
                 {"wd_gse", reference_mean_ratio(ReferenceKind::wd_gse)}};
  j["haar"] = {{"capacity", haar_reference({HaarReferenceKind::capacity})},
               {"log_antiflatness", haar_reference({HaarReferenceKind::log_antiflatness})},
               {"page_entropy_half", haar_reference({HaarReferenceKind::page_entropy})}};
  j["syk2"] = {{"K_half", syk2_reference(Syk2ReferenceKind::mean_entropy, 1, 0.5) / std::numbers::ln2},
               {"log_antiflatness_per_qubit_half", syk2_reference(Syk2ReferenceKind::log_antiflatness, 1, 0.5)}};
  json sre = json::object();
  for (int n = 1; n <= 16; ++n)
    sre[std::to_string(n)] = {{"haar", sre_reference(SREReferenceKind::haar, n)},
                              {"golden", sre_reference(SREReferenceKind::golden, n)},
                              {"gs_fit", sre_reference(SREReferenceKind::gs_fit, n)},
                              {"ms_fit", sre_reference(SREReferenceKind::ms_fit, n)}};
  j["sre"] = sre;
  j["transition_exponent"] = -0.78;
  return j;
}

// Cheap oracle checks; returns the number of failures.
int selftest() {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    if (!ok) ++failures;
  };
  {
    double worst = 0.0;
    const int n = 8;
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        const auto ab = multiply(jordan_wigner(a, n), jordan_wigner(b, n));
        const auto ba = multiply(jordan_wigner(b, n), jordan_wigner(a, n));
        const Eigen::MatrixXcd anti = to_dense(ab) + to_dense(ba);
        const Eigen::MatrixXcd want =
            (a == b ? 2.0 : 0.0) * Eigen::MatrixXcd::Identity(anti.rows(), anti.cols());
        worst = std::max(worst, (anti - want).norm());
      }
    check("majorana_anticommutation", worst < 1e-12, fmt::format("max deviation {:.2e}", worst));
  }
  {
    const PauliSum h = build_syk(sample_couplings({10, 4, 1.0, 3}));
    const auto sp = assemble_sparse(h);
    const Eigen::MatrixXcd dense = h.to_dense();
    const double diff = (sp.to_dense() - dense).norm();
    check("sparse_matches_dense", diff < 1e-10, fmt::format("difference {:.2e}", diff));
    const auto spec = full_spectrum(sp, false);
    const auto gs = ground_state(sp);
    check("lanczos_ground_energy", std::abs(gs.value - spec.eigenvalues[0]) < 1e-8,
          fmt::format("lanczos {:.10f} dense {:.10f}", gs.value, spec.eigenvalues[0]));
  }
  {
    const auto est = exact_sre(golden_product_state(4), 2.0);
    check("golden_sre", std::abs(est.value - 4 * std::log2(1.5)) < 1e-9, fmt::format("M2 = {:.12f}", est.value));
  }
  {
    const double ce = haar_reference({HaarReferenceKind::capacity});
    check("haar_capacity_constant", std::abs(ce + 0.5399) < 1e-4, fmt::format("C_E = {:.6f}", ce));
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"syklab: entanglement and magic diagnostics for interpolated SYK models"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Assemble one Hamiltonian and print its summary");
  int b_n = 8;
  double b_g = 0.0;
  std::uint64_t b_seed = 1;
  std::string b_out;
  build->add_option("--n", b_n, "Majorana count N")->capture_default_str();
  build->add_option("--g", b_g, "Interpolation parameter")->capture_default_str();
  build->add_option("--seed", b_seed, "Disorder seed")->capture_default_str();
  build->add_option("--out", b_out, "Write a binary matrix dump here");

  // run
  auto* run = app.add_subcommand("run", "Run a disorder-ensemble experiment");
  std::string r_config, r_n, r_g, r_diag, r_out;
  std::uint64_t r_seed = 0;
  int r_real = -1, r_threads = 0;
  bool r_resume = false;
  run->add_option("--config", r_config, "JSON experiment config");
  run->add_option("--n", r_n, "Comma-separated Majorana counts");
  run->add_option("--g", r_g, "g value or start:stop:step");
  run->add_option("--seed", r_seed, "Base seed");
  run->add_option("--realizations", r_real, "Realizations per N");
  run->add_option("--diagnostics", r_diag, "Comma-separated diagnostics");
  run->add_option("--out", r_out, "Output directory");
  run->add_option("--threads", r_threads, "Worker threads");
  run->add_flag("--resume", r_resume, "Clear stale claims from an interrupted run");

  // merge
  auto* merge = app.add_subcommand("merge", "Merge result stores");
  std::vector<std::string> m_inputs;
  std::string m_out = "merged.jsonl";
  merge->add_option("inputs", m_inputs, "Store files or run directories")->required();
  merge->add_option("--out", m_out, "Merged store path")->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "Emit CSV and gnuplot scripts for figures");
  std::string p_store, p_out = "report";
  std::vector<std::string> p_figs;
  report->add_option("--store", p_store, "Store file or run directory")->required();
  report->add_option("--figure", p_figs, "fig1..fig6, dos, gap")->required();
  report->add_option("--out", p_out, "Output directory")->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a model to two-column CSV data (x,y)");
  std::string f_model, f_input;
  int f_degree = 10, f_boot = 0;
  fit->add_option("--model", f_model, "linear, power_law, one_minus_a_exp, a_times_one_minus_exp, polynomial")
      ->required();
  fit->add_option("--input", f_input, "CSV with x,y rows")->required();
  fit->add_option("--degree", f_degree, "Polynomial degree")->capture_default_str();
  fit->add_option("--bootstrap", f_boot, "Bootstrap resamples for comparison errors");

  app.add_subcommand("references", "Print every closed-form reference constant as JSON");
  app.add_subcommand("selftest", "Run the quick oracle suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      const PauliSum h4 = build_syk(sample_couplings({b_n, 4, 1.0, b_seed}));
      const PauliSum h2 = build_syk(sample_couplings({b_n, 2, 1.0, b_seed}));
      const PauliSum h = build_interpolated(h4, h2, b_g);
      const SparseHamiltonian sp = assemble_sparse(h);
      json j{{"N", b_n}, {"g", b_g}, {"seed", b_seed}, {"terms", h.size()}, {"dim", sp.dim()},
             {"nnz", sp.nnz()}, {"bytes", sp.bytes()}, {"hermitian", sp.is_hermitian()},
             {"preserves_parity", sp.preserves_parity()}, {"norm_bound", sp.norm_bound()},
             {"fingerprint", fmt::format("{:016x}", sp.fingerprint())}};
      if (!b_out.empty()) {
        std::ofstream out(b_out, std::ios::binary);
        write_hamiltonian_dump(out, {b_seed, static_cast<std::uint32_t>(b_n), 4, b_g}, sp);
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (run->parsed()) {
      ExperimentConfig cfg;
      if (!r_config.empty()) {
        std::ifstream in(r_config);
        if (!in) throw ArgumentError("cannot open config " + r_config);
        json j;
        try {
          j = json::parse(in, nullptr, true, true);
        } catch (const json::exception& e) {
          throw ArgumentError(std::string("config parse error: ") + e.what());
        }
        cfg = ExperimentConfig::from_json(j);
      }
      if (const char* env = std::getenv(kOutputEnv); env && *env) cfg.output_dir = env;
      if (!r_n.empty()) {
        cfg.n_list.clear();
        for (const auto& s : split(r_n, ',')) cfg.n_list.push_back(std::stoi(s));
      }
      if (!r_g.empty()) cfg.g_grid = parse_grid(r_g);
      if (run->count("--seed")) cfg.seed = r_seed;
      if (r_real >= 0)
        for (int n : cfg.n_list) cfg.realizations[n] = r_real;
      if (!r_diag.empty()) {
        cfg.diagnostics.clear();
        for (const auto& s : split(r_diag, ',')) cfg.diagnostics.insert(parse_diagnostic(s));
      }
      if (!r_out.empty()) cfg.output_dir = r_out;
      if (r_threads > 0) cfg.threads = r_threads;
      cfg.validate();
      const RunSummary s = run_experiment(cfg, r_resume);
      std::cout << fmt::format("units: {} total, {} computed, {} skipped, {} pending\nrecords: {}\nstore: {}\n",
                               s.units_total, s.units_computed, s.units_skipped, s.pending.size(),
                               s.records_written, s.store_path.string());
      for (const auto& p : s.pending) std::cout << "pending: " << p << "\n";
      return s.exit_code();
    }
    if (merge->parsed()) {
      std::vector<ResultStore> stores;
      for (const auto& in : m_inputs)
        stores.push_back(fs::is_directory(in) ? ResultStore::load_directory(in) : ResultStore::read(fs::path(in)));
      const ResultStore merged = merge_stores(stores);
      merged.write(fs::path(m_out));
      std::cout << merged.records.size() << " records -> " << m_out << "\n";
      return 0;
    }
    if (report->parsed()) {
      const ResultStore store = fs::is_directory(p_store) ? ResultStore::read(fs::path(p_store) / "store.jsonl")
                                                          : ResultStore::read(fs::path(p_store));
      int code = 0;
      for (const auto& f : p_figs) {
        const auto r = emit_report(store, parse_figure(f), p_out);
        for (const auto& file : r.files) std::cout << file.string() << "\n";
        for (const auto& m : r.missing) std::cout << "missing: " << m << "\n";
        if (!r.complete()) code = 2;
      }
      return code;
    }
    if (fit->parsed()) {
      std::ifstream in(f_input);
      if (!in) throw ArgumentError("cannot open " + f_input);
      std::vector<double> xs, ys;
      for (std::string line; std::getline(in, line);) {
        const auto cols = split(line, ',');
        if (cols.size() < 2) continue;
        try {
          const double x = std::stod(cols[0]), y = std::stod(cols[1]);
          xs.push_back(x);
          ys.push_back(y);
        } catch (const std::invalid_argument&) {
          continue;  // header
        }
      }
      const FitModel model = parse_fit_model(f_model);
      Fitter fitter = [&](std::span<const double> x, std::span<const double> y) {
        switch (model) {
          case FitModel::linear: return linear_fit(x, y);
          case FitModel::power_law: return power_law_fit(x, y);
          case FitModel::polynomial: return polynomial_peak(x, y, f_degree).fit;
          default: return saturating_exponential_fit(x, y, model);
        }
      };
      const FitResult r = fitter(xs, ys);
      json j = json::parse(to_json(r));
      if (model == FitModel::polynomial) {
        const auto peak = polynomial_peak(xs, ys, f_degree);
        j["peak"] = {{"location", peak.location}, {"value", peak.value}, {"at_boundary", peak.at_boundary}};
      }
      if (f_boot > 0) j["bootstrap_std_errors"] = bootstrap_std_errors(fitter, xs, ys, f_boot, 1);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (app.got_subcommand("references")) {
      std::cout << references().dump(2) << "\n";
      return 0;
    }
    if (app.got_subcommand("selftest")) return selftest() == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
