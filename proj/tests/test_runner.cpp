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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "syklab/errors.hpp"
#include "syklab/runner.hpp"

using namespace syklab;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory removed on scope exit.
struct Scratch {
  fs::path path;
  explicit Scratch(const std::string& name) : path(fs::temp_directory_path() / ("syklab_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Scratch() { fs::remove_all(path); }
};

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c;
  c.n_list = {8};
  c.realizations = {{8, 2}};
  c.g_grid = {0.0, 1.0, 1.0};
  c.diagnostics = {Diagnostic::entropy};
  c.states = {"ground"};
  c.seed = 5;
  c.output_dir = out.string();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

EnsembleRecord record(int n, double g, double value) {
  EnsembleRecord r;
  r.seed = 1;
  r.n_majorana = n;
  r.g = g;
  r.state_kind = "ground";
  r.diagnostic = "entropy";
  r.payload = {{"mean", value}};
  r.code_version = std::string(code_version());
  r.config_hash = "h";
  return r;
}

}  // namespace

TEST_CASE("grids and defaults") {
  CHECK(GGrid{0.0, 1.0, 0.25}.values() == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  CHECK(GGrid{}.values().size() == 101);
  CHECK_THROWS_AS((GGrid{0.0, 1.5, 0.1}.validate()), ArgumentError);
  CHECK_THROWS_AS((GGrid{0.0, 1.0, 0.0}.validate()), ArgumentError);
  CHECK(default_realizations(8) == 1000);
  CHECK(default_realizations(14) == 400);
  CHECK(default_realizations(20) == 200);
  CHECK(default_realizations(24) == 100);
  CHECK(default_realizations(28) == 50);
  CHECK(default_realizations(30) == 30);
  CHECK(default_realizations(32) == 10);

  ExperimentConfig c;
  CHECK(c.grid_for(Diagnostic::sre).step == doctest::Approx(0.05));
  CHECK(c.grid_for(Diagnostic::dos).values() == std::vector<double>{0.0, 1.0});
  CHECK(c.grid_for(Diagnostic::entropy).step == doctest::Approx(0.01));
}

TEST_CASE("config parsing") {
  const auto j = nlohmann::json::parse(R"({"N_list": [8, 10], "g_grid": {"start": 0, "stop": 1, "step": 0.5},
    "realizations": {"8": 3}, "seed": 9, "diagnostics": ["entropy", "sre"], "states": ["ground"]})");
  const auto c = ExperimentConfig::from_json(j);
  CHECK(c.n_list == std::vector<int>{8, 10});
  CHECK(c.realizations_for(8) == 3);
  CHECK(c.realizations_for(10) == 1000);
  CHECK(c.diagnostics.count(Diagnostic::sre) == 1);
  CHECK(ExperimentConfig::from_json(c.to_json()).hash() == c.hash());

  auto other = c;
  other.threads = 8;
  other.output_dir = "/elsewhere";
  CHECK(other.hash() == c.hash());
  other.seed = 10;
  CHECK(other.hash() != c.hash());

  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"N_list": [7]})")), ArgumentError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"bogus": 1})")), ArgumentError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"diagnostics": ["nope"]})")), ArgumentError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"f": 0.3, "N_list": [8]})")), ArgumentError);
  CHECK_THROWS_AS(parse_diagnostic("magic"), ArgumentError);
}

TEST_CASE("seeds and record keys") {
  CHECK(realization_seed(1, 8, 0) == realization_seed(1, 8, 0));
  CHECK(realization_seed(1, 8, 0) != realization_seed(1, 8, 1));
  CHECK(realization_seed(1, 8, 0) != realization_seed(1, 10, 0));
  CHECK(realization_seed(1, 8, 0) != realization_seed(2, 8, 0));

  const auto r = record(8, 0.1, 0.5);
  CHECK(r.key() == "seed=1|N=8|g=0.100000000|state=ground|diagnostic=entropy");
  const auto back = EnsembleRecord::from_json(r.to_json());
  CHECK(back.key() == r.key());
  CHECK(back.payload == r.payload);
}

TEST_CASE("counting contract and idempotent reruns") {
  Scratch dir("count");
  auto c = small_config(dir.path);
  const auto first = run_experiment(c);
  CHECK(first.exit_code() == 0);
  CHECK(first.units_total == 2);
  CHECK(first.units_computed == 2);
  const auto store = ResultStore::read(first.store_path);
  CHECK(store.records.size() == 4);
  for (const auto& rec : store.records) {
    CHECK(rec.diagnostic == "entropy");
    CHECK(rec.payload.contains("mean"));
    CHECK(rec.config_hash == c.hash());
  }
  const std::string bytes = slurp(first.store_path);

  const auto second = run_experiment(c);
  CHECK(second.units_computed == 0);
  CHECK(second.units_skipped == 2);
  CHECK(slurp(second.store_path) == bytes);

  // Both state kinds double the count.
  Scratch dir2("count2");
  auto c2 = small_config(dir2.path);
  c2.states = {"ground", "middle"};
  CHECK(ResultStore::read(run_experiment(c2).store_path).records.size() == 8);
}

TEST_CASE("couplings are shared across the g sweep") {
  ExperimentConfig c = small_config("unused");
  c.g_grid = {0.0, 1.0, 0.5};
  c.diagnostics = {Diagnostic::gap};
  const auto a = compute_unit(c, 8, 0);
  CHECK(a.size() == 3);
  // Same unit recomputed gives identical payloads.
  const auto b = compute_unit(c, 8, 0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].payload == b[i].payload);
  // The g = 0.5 gap is computed from the same couplings as its endpoints,
  // so a single-g run at 0.5 reproduces it.
  c.g_grid = {0.5, 0.5, 0.1};
  const auto mid = compute_unit(c, 8, 0);
  REQUIRE(mid.size() == 1);
  CHECK(mid[0].payload == a[1].payload);
}

TEST_CASE("memory budget queues units") {
  Scratch dir("budget");
  auto c = small_config(dir.path);
  c.memory_budget = 16;
  const auto s = run_experiment(c);
  CHECK(s.exit_code() == 2);
  CHECK(s.pending.size() == 2);
  CHECK(fs::exists(dir.path / "manifest.txt"));
  CHECK(ResultStore::read(s.store_path).records.empty());
}

TEST_CASE("merging stores") {
  ResultStore a, b, conflict;
  a.records = {record(8, 0.0, 1.0), record(8, 0.5, 2.0)};
  b.records = {record(10, 0.0, 3.0)};
  CHECK(merge_stores({a, b}).records.size() == 3);
  CHECK(merge_stores({a, a}).records.size() == 2);
  conflict.records = {record(8, 0.5, 9.0)};
  try {
    merge_stores({a, conflict});
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(std::string(e.what()).find("g=0.500000000") != std::string::npos);
  }

  std::stringstream io;
  merge_stores({b, a}).write(io);
  const auto back = ResultStore::read(io);
  REQUIRE(back.records.size() == 3);
  CHECK(back.records.front().n_majorana == 8);
  CHECK(back.records.back().n_majorana == 10);
}

TEST_CASE("reports") {
  Scratch dir("report");
  const auto empty = emit_report(ResultStore{}, Figure::fig1, dir.path);
  CHECK_FALSE(empty.complete());
  CHECK(empty.files.empty());
  CHECK(fs::is_empty(dir.path));

  auto c = small_config(dir.path / "run");
  c.diagnostics = {Diagnostic::entropy, Diagnostic::gap};
  const auto s = run_experiment(c);
  const auto store = ResultStore::read(s.store_path);
  const auto fig1 = emit_report(store, Figure::fig1, dir.path / "fig");
  CHECK(fig1.complete());
  CHECK(fig1.files.size() >= 2);
  for (const auto& f : fig1.files) CHECK(fs::exists(f));
  CHECK(emit_report(store, Figure::gap, dir.path / "fig").complete());
  CHECK_FALSE(emit_report(store, Figure::fig5, dir.path / "fig").complete());
  CHECK_THROWS_AS(parse_figure("fig9"), ArgumentError);
}

TEST_CASE("capacity figure reports magnitudes") {
  Scratch dir("capacity");
  auto c = small_config(dir.path / "run");
  c.diagnostics = {Diagnostic::capacity};
  const auto store = ResultStore::read(run_experiment(c).store_path);
  for (const auto& rec : store.records) CHECK(rec.payload["mean"].get<double>() < 0.0);
  const auto fig6 = emit_report(store, Figure::fig6, dir.path / "fig");
  REQUIRE(fig6.complete());
  std::ifstream csv(dir.path / "fig" / "fig6.csv");
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, ',');) cols.push_back(col);
    REQUIRE(cols.size() == 7);
    CHECK(std::stod(cols[3]) > 0.0);
    CHECK(std::stod(cols[6]) == doctest::Approx(0.539868).epsilon(1e-5));
    ++rows;
  }
  CHECK(rows == 2);
}
