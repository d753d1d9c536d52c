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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace syklab {

enum class Diagnostic { entropy, rdm_curve, ess, kl_fidelity, sre, capacity, antiflatness, dos, gap };
Diagnostic parse_diagnostic(std::string_view name);
std::string_view to_string(Diagnostic d);

/// Inclusive grid start, start + step, ..., stop.
struct GGrid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;

  std::vector<double> values() const;
  void validate() const;
};

/// Realization count used when the config does not name one for N.
int default_realizations(int n_majorana);

struct ExperimentConfig {
  std::vector<int> n_list{8};
  GGrid g_grid{};
  /// Per-diagnostic overrides of g_grid. sre defaults to a step of 0.05 and
  /// dos to the two endpoints.
  std::map<Diagnostic, GGrid> diagnostic_grids;
  std::map<int, int> realizations;
  std::uint64_t seed = 1;
  std::set<Diagnostic> diagnostics{Diagnostic::entropy};
  std::vector<std::string> states{"ground", "middle"};
  int bipartition_count = 0;  // 0: N bipartitions (or all of them if fewer)
  double f = 0.5;
  double coupling_scale = 1.0;
  long long sre_samples = 10000;
  int exact_sre_limit = 8;
  std::size_t ess_bins = 100;
  double ess_cutoff = 10.0;
  std::size_t memory_budget = std::size_t{4} << 30;
  std::string output_dir = "syklab-out";
  int threads = 1;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;

  int realizations_for(int n_majorana) const;
  GGrid grid_for(Diagnostic d) const;
  /// Hash of everything that affects results (not threads or paths).
  std::string hash() const;
};

/// Seed of realization r at size N, derived from the base seed.
std::uint64_t realization_seed(std::uint64_t base, int n_majorana, int realization);

struct EnsembleRecord {
  std::uint64_t seed = 0;
  int n_majorana = 0;
  double g = 0.0;
  std::string state_kind;  // ground, middle or spectrum
  std::string diagnostic;
  int realization = 0;
  nlohmann::json payload;
  std::string code_version;
  std::string config_hash;

  nlohmann::json to_json() const;
  static EnsembleRecord from_json(const nlohmann::json& j);
  /// seed|N|g|state|diagnostic with g printed to 1e-9.
  std::string key() const;
};

bool operator<(const EnsembleRecord& a, const EnsembleRecord& b);

/// Records sorted by (N, seed, g, state, diagnostic).
struct ResultStore {
  std::vector<EnsembleRecord> records;

  void sort();
  void write(std::ostream& out) const;
  void write(const std::filesystem::path& path) const;
  static ResultStore read(std::istream& in);
  static ResultStore read(const std::filesystem::path& path);
  /// All unit files under <dir>/records, merged.
  static ResultStore load_directory(const std::filesystem::path& dir);
};

/// Union of the stores. Identical keys must carry identical payloads;
/// otherwise IntegrityError names the key.
ResultStore merge_stores(const std::vector<ResultStore>& stores);

/// All records for one (N, realization) work unit.
std::vector<EnsembleRecord> compute_unit(const ExperimentConfig& config, int n_majorana,
                                         int realization);

struct RunSummary {
  int units_total = 0;
  int units_computed = 0;
  int units_skipped = 0;  // already on disk
  std::vector<std::string> pending;  // manifest of work not done
  std::size_t records_written = 0;
  std::filesystem::path store_path;

  int exit_code() const { return pending.empty() ? 0 : 2; }
};

/// Runs every (N, realization) unit not yet on disk, then writes the merged
/// store to <output_dir>/store.jsonl. With `resume`, stale claim files from
/// an interrupted run are removed first.
RunSummary run_experiment(const ExperimentConfig& config, bool resume = false);

enum class Figure { fig1, fig2, fig3, fig4, fig5, fig6, dos, gap };
Figure parse_figure(std::string_view name);
std::string_view to_string(Figure f);

struct ReportResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> missing;  // manifest when records are absent

  bool complete() const { return missing.empty(); }
};

/// Tidy CSV plus a gnuplot script for the figure. Nothing is written when
/// required records are missing.
ReportResult emit_report(const ResultStore& store, Figure figure,
                         const std::filesystem::path& out_dir);

/// Version string stamped on every record.
std::string_view code_version();

}  // namespace syklab
