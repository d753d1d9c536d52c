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

#include "syklab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "syklab/entanglement.hpp"
#include "syklab/errors.hpp"
#include "syklab/ess.hpp"
#include "syklab/spectral.hpp"
#include "syklab/sre.hpp"
#include "syklab/syk.hpp"

namespace syklab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kGridTol = 1e-9;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool on_grid(const std::vector<double>& grid, double g) {
  return std::any_of(grid.begin(), grid.end(), [&](double v) { return std::abs(v - g) < kGridTol; });
}

bool is_state_diagnostic(Diagnostic d) { return d != Diagnostic::dos && d != Diagnostic::gap; }

json grid_json(const GGrid& g) { return {{"start", g.start}, {"stop", g.stop}, {"step", g.step}}; }

GGrid grid_from(const json& j) {
  GGrid g;
  for (const auto& [k, v] : j.items()) {
    if (k == "start") g.start = v.get<double>();
    else if (k == "stop") g.stop = v.get<double>();
    else if (k == "step") g.step = v.get<double>();
    else throw ArgumentError("config: unknown grid key '" + k + "'");
  }
  g.validate();
  return g;
}

int cut_size(const ExperimentConfig& c, int n_qubits) {
  if (std::abs(c.f - 0.5) < 1e-12) return half_subsystem(n_qubits);
  const double r = c.f * n_qubits;
  if (std::abs(r - std::round(r)) > 1e-9)
    throw ArgumentError(fmt::format("config: f = {} does not cut {} qubits evenly", c.f, n_qubits));
  return static_cast<int>(std::round(r));
}

struct UnitId {
  int n;
  int r;
  std::string name() const { return fmt::format("N{}_r{}", n, r); }
};

}  // namespace

// --- enums ------------------------------------------------------------------

std::string_view to_string(Diagnostic d) {
  switch (d) {
    case Diagnostic::entropy: return "entropy";
    case Diagnostic::rdm_curve: return "rdm_curve";
    case Diagnostic::ess: return "ess";
    case Diagnostic::kl_fidelity: return "kl_fidelity";
    case Diagnostic::sre: return "sre";
    case Diagnostic::capacity: return "capacity";
    case Diagnostic::antiflatness: return "antiflatness";
    case Diagnostic::dos: return "dos";
    case Diagnostic::gap: return "gap";
  }
  return "unknown";
}

Diagnostic parse_diagnostic(std::string_view name) {
  for (auto d : {Diagnostic::entropy, Diagnostic::rdm_curve, Diagnostic::ess, Diagnostic::kl_fidelity,
                 Diagnostic::sre, Diagnostic::capacity, Diagnostic::antiflatness, Diagnostic::dos,
                 Diagnostic::gap})
    if (to_string(d) == name) return d;
  throw ArgumentError("unknown diagnostic '" + std::string(name) + "'");
}

std::string_view code_version() { return "0.1.0"; }

// --- grids and config -----------------------------------------------------------

void GGrid::validate() const {
  if (!(start >= 0.0 && stop <= 1.0 && start <= stop))
    throw ArgumentError("g grid must satisfy 0 <= start <= stop <= 1");
  if (!(step > 0.0)) throw ArgumentError("g grid step must be positive");
}

std::vector<double> GGrid::values() const {
  validate();
  const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  for (long long i = 0; i <= count; ++i)
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  return out;
}

int default_realizations(int n) {
  if (n <= 10) return 1000;
  if (n <= 14) return 400;
  if (n <= 20) return 200;
  if (n <= 26) return 100;
  if (n <= 28) return 50;
  if (n <= 30) return 30;
  return 10;
}

int ExperimentConfig::realizations_for(int n) const {
  const auto it = realizations.find(n);
  return it == realizations.end() ? default_realizations(n) : it->second;
}

GGrid ExperimentConfig::grid_for(Diagnostic d) const {
  if (const auto it = diagnostic_grids.find(d); it != diagnostic_grids.end()) return it->second;
  if (d == Diagnostic::sre) return {g_grid.start, g_grid.stop, std::max(g_grid.step, 0.05)};
  if (d == Diagnostic::dos) return {g_grid.start, g_grid.stop, g_grid.stop - g_grid.start > 0 ? g_grid.stop - g_grid.start : 1.0};
  return g_grid;
}

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw ArgumentError("config: N_list is empty");
  for (int n : n_list)
    if (n < 4 || n % 2 != 0 || n > 62) throw ArgumentError(fmt::format("config: N = {} must be even and in [4, 62]", n));
  g_grid.validate();
  for (const auto& [d, g] : diagnostic_grids) g.validate();
  for (const auto& [n, m] : realizations)
    if (m < 0) throw ArgumentError(fmt::format("config: negative realization count for N = {}", n));
  if (diagnostics.empty()) throw ArgumentError("config: no diagnostics requested");
  for (const auto& s : states)
    if (s != "ground" && s != "middle") throw ArgumentError("config: unknown state '" + s + "'");
  if (!(f > 0.0 && f < 1.0)) throw ArgumentError("config: f must lie in (0, 1)");
  for (int n : n_list) cut_size(*this, n / 2);
  if (bipartition_count < 0) throw ArgumentError("config: bipartition_count must be >= 0");
  if (sre_samples < 2) throw ArgumentError("config: sre_samples must be >= 2");
  if (ess_bins < 1 || !(ess_cutoff > 0.0)) throw ArgumentError("config: bad ESS histogram settings");
  if (threads < 1) throw ArgumentError("config: threads must be >= 1");
}

json ExperimentConfig::to_json() const {
  json j;
  j["N_list"] = n_list;
  j["g_grid"] = grid_json(g_grid);
  json grids = json::object();
  for (const auto& [d, g] : diagnostic_grids) grids[std::string(syklab::to_string(d))] = grid_json(g);
  j["grids"] = grids;
  json reals = json::object();
  for (const auto& [n, m] : realizations) reals[std::to_string(n)] = m;
  j["realizations"] = reals;
  j["seed"] = seed;
  std::vector<std::string> diags;
  for (auto d : diagnostics) diags.emplace_back(syklab::to_string(d));
  j["diagnostics"] = diags;
  j["states"] = states;
  j["bipartition_count"] = bipartition_count;
  j["f"] = f;
  j["coupling_scale"] = coupling_scale;
  j["sre_samples"] = sre_samples;
  j["exact_sre_limit"] = exact_sre_limit;
  j["ess_bins"] = ess_bins;
  j["ess_cutoff"] = ess_cutoff;
  j["memory_budget"] = memory_budget;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ArgumentError("config: top level must be an object");
  ExperimentConfig c;
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "N_list") c.n_list = v.get<std::vector<int>>();
      else if (k == "g_grid") c.g_grid = grid_from(v);
      else if (k == "grids") {
        for (const auto& [d, g] : v.items()) c.diagnostic_grids[parse_diagnostic(d)] = grid_from(g);
      } else if (k == "realizations") {
        for (const auto& [n, m] : v.items()) c.realizations[std::stoi(n)] = m.get<int>();
      } else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "diagnostics") {
        c.diagnostics.clear();
        for (const auto& d : v) c.diagnostics.insert(parse_diagnostic(d.get<std::string>()));
      } else if (k == "states") c.states = v.get<std::vector<std::string>>();
      else if (k == "bipartition_count") c.bipartition_count = v.get<int>();
      else if (k == "f") c.f = v.get<double>();
      else if (k == "coupling_scale") c.coupling_scale = v.get<double>();
      else if (k == "sre_samples") c.sre_samples = v.get<long long>();
      else if (k == "exact_sre_limit") c.exact_sre_limit = v.get<int>();
      else if (k == "ess_bins") c.ess_bins = v.get<std::size_t>();
      else if (k == "ess_cutoff") c.ess_cutoff = v.get<double>();
      else if (k == "memory_budget") c.memory_budget = v.get<std::size_t>();
      else if (k == "output_dir") c.output_dir = v.get<std::string>();
      else if (k == "threads") c.threads = v.get<int>();
      else throw ArgumentError("config: unknown key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::hash() const {
  json j = to_json();
  j.erase("output_dir");
  j.erase("threads");
  j.erase("memory_budget");
  return fmt::format("{:016x}", fnv1a(j.dump()));
}

std::uint64_t realization_seed(std::uint64_t base, int n, int r) {
  return splitmix(splitmix(base) ^ (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(r));
}

// --- records and stores ---------------------------------------------------------

json EnsembleRecord::to_json() const {
  json j;
  j["seed"] = seed;
  j["N"] = n_majorana;
  j["g"] = g;
  j["state"] = state_kind;
  j["diagnostic"] = diagnostic;
  j["realization"] = realization;
  j["payload"] = payload;
  j["provenance"] = {{"code_version", code_version}, {"config_hash", config_hash}};
  return j;
}

EnsembleRecord EnsembleRecord::from_json(const json& j) {
  try {
    EnsembleRecord r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_majorana = j.at("N").get<int>();
    r.g = j.at("g").get<double>();
    r.state_kind = j.at("state").get<std::string>();
    r.diagnostic = j.at("diagnostic").get<std::string>();
    r.realization = j.value("realization", 0);
    r.payload = j.at("payload");
    if (j.contains("provenance")) {
      r.code_version = j["provenance"].value("code_version", "");
      r.config_hash = j["provenance"].value("config_hash", "");
    }
    return r;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed record: ") + e.what());
  }
}

std::string EnsembleRecord::key() const {
  return fmt::format("seed={}|N={}|g={:.9f}|state={}|diagnostic={}", seed, n_majorana, g, state_kind,
                     diagnostic);
}

bool operator<(const EnsembleRecord& a, const EnsembleRecord& b) {
  const auto ga = std::llround(a.g * 1e9), gb = std::llround(b.g * 1e9);
  return std::tie(a.n_majorana, a.realization, a.seed, ga, a.state_kind, a.diagnostic) <
         std::tie(b.n_majorana, b.realization, b.seed, gb, b.state_kind, b.diagnostic);
}

void ResultStore::sort() { std::stable_sort(records.begin(), records.end()); }

void ResultStore::write(std::ostream& out) const {
  for (const auto& r : records) out << r.to_json().dump() << '\n';
}

void ResultStore::write(const fs::path& path) const {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    write(out);
  }
  fs::rename(tmp, path);
}

ResultStore ResultStore::read(std::istream& in) {
  ResultStore s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ArgumentError(std::string("malformed record line: ") + e.what());
    }
    s.records.push_back(EnsembleRecord::from_json(j));
  }
  return s;
}

ResultStore ResultStore::read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open store " + path.string());
  return read(in);
}

ResultStore ResultStore::load_directory(const fs::path& dir) {
  std::vector<ResultStore> parts;
  const fs::path rec = dir / "records";
  if (fs::exists(rec)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(rec))
      if (e.path().extension() == ".jsonl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) parts.push_back(read(f));
  }
  return merge_stores(parts);
}

ResultStore merge_stores(const std::vector<ResultStore>& stores) {
  std::map<std::string, const EnsembleRecord*> seen;
  ResultStore out;
  for (const auto& s : stores)
    for (const auto& r : s.records) {
      const auto key = r.key();
      const auto [it, inserted] = seen.emplace(key, &r);
      if (inserted) {
        out.records.push_back(r);
      } else if (it->second->payload != r.payload) {
        throw IntegrityError("conflicting payloads for record " + key);
      }
    }
  out.sort();
  return out;
}

// --- computation ----------------------------------------------------------------

namespace {

struct StateDiagnostics {
  const ExperimentConfig& config;
  std::vector<Bipartition> cuts;       // at the configured f
  std::vector<Bipartition> half_cuts;  // at R = floor(n/2)
  std::uint64_t seed;

  std::vector<EntanglementSpectrum> spectra(const StateVector& psi, const std::vector<Bipartition>& bs) const {
    std::vector<EntanglementSpectrum> out;
    out.reserve(bs.size());
    for (const auto& b : bs) out.push_back(partial_trace(psi, b));
    return out;
  }

  static json mean_std(const std::vector<double>& v, int r) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    s = v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0;
    return {{"mean", m}, {"std", s}, {"R", r}, {"cuts", v.size()}};
  }

  json compute(Diagnostic d, const StateVector& psi, std::uint64_t sre_seed) const {
    switch (d) {
      case Diagnostic::entropy:
      case Diagnostic::capacity:
      case Diagnostic::antiflatness: {
        std::vector<double> vals;
        for (const auto& es : spectra(psi, cuts)) {
          if (d == Diagnostic::entropy) vals.push_back(renyi_entropy(es, 1.0));
          else if (d == Diagnostic::capacity) vals.push_back(capacity_of_entanglement(es));
          else vals.push_back(log_antiflatness(es));
        }
        return mean_std(vals, cuts.front().size());
      }
      case Diagnostic::rdm_curve:
      case Diagnostic::kl_fidelity: {
        std::vector<double> avg;
        for (const auto& es : spectra(psi, half_cuts)) {
          if (avg.empty()) avg.assign(es.eigenvalues.size(), 0.0);
          for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += es.eigenvalues[k];
        }
        for (double& v : avg) v /= static_cast<double>(half_cuts.size());
        return {{"eigenvalues", avg}, {"R", half_cuts.front().size()}};
      }
      case Diagnostic::ess: {
        const std::size_t bins = config.ess_bins;
        std::vector<long long> counts(bins, 0);
        long long excluded = 0, total = 0;
        double mm_sum = 0.0;
        long long mm_n = 0;
        for (const auto& cut : half_cuts) {
          for (const auto& asc : parity_resolved_spectra(psi, cut)) {
            if (asc.size() < 3) continue;
            const auto ratios = gap_ratios(asc);
            for (double r : ratios) {
              ++total;
              if (r > config.ess_cutoff) {
                ++excluded;
                continue;
              }
              auto b = static_cast<std::size_t>(r / config.ess_cutoff * static_cast<double>(bins));
              counts[std::min(b, bins - 1)] += 1;
            }
            for (double r : min_max_ratios(asc)) {
              mm_sum += r;
              ++mm_n;
            }
          }
        }
        return {{"counts", counts}, {"excluded", excluded}, {"total", total}, {"cutoff", config.ess_cutoff},
                {"mean_min_max", mm_n ? mm_sum / static_cast<double>(mm_n) : 0.0}};
      }
      case Diagnostic::sre: {
        const int n = psi.n_qubits();
        SREEstimate est;
        if (n <= config.exact_sre_limit) {
          est = exact_sre(psi, 2.0, config.exact_sre_limit);
        } else {
          const auto mps = mps_compress(psi, 1 << ((n + 1) / 2), 1e-8);
          est = sampled_sre2(mps, config.sre_samples, sre_seed);
        }
        return {{"value", est.value}, {"std_error", est.std_error},
                {"method", std::string(to_string(est.method))}, {"n_samples", est.n_samples}};
      }
      case Diagnostic::dos:
      case Diagnostic::gap: break;
    }
    throw ArgumentError("not a state diagnostic");
  }
};

std::vector<Bipartition> cuts_for(const ExperimentConfig& c, int n_qubits, int r, std::uint64_t seed) {
  const double total = [&] {
    double t = 1.0;
    for (int i = 1; i <= r; ++i) t = t * (n_qubits - r + i) / i;
    return t;
  }();
  int count = c.bipartition_count > 0 ? c.bipartition_count : 2 * n_qubits;
  count = static_cast<int>(std::min<double>(count, total));
  return sample_bipartitions(n_qubits, r, count, seed);
}

}  // namespace

std::vector<EnsembleRecord> compute_unit(const ExperimentConfig& config, int n, int realization) {
  const std::uint64_t seed = realization_seed(config.seed, n, realization);
  DisorderSpec spec4{n, 4, config.coupling_scale, seed};
  DisorderSpec spec2{n, 2, config.coupling_scale, seed};
  const PauliSum h4 = build_syk(sample_couplings(spec4));
  const PauliSum h2 = build_syk(sample_couplings(spec2));
  const int nq = n / 2;

  StateDiagnostics sd{config, cuts_for(config, nq, cut_size(config, nq), splitmix(seed ^ 0xb1)),
                      cuts_for(config, nq, half_subsystem(nq), splitmix(seed ^ 0xb2)), seed};

  std::map<Diagnostic, std::vector<double>> grids;
  std::vector<double> all_g;
  for (auto d : config.diagnostics) {
    grids[d] = config.grid_for(d).values();
    for (double g : grids[d])
      if (!on_grid(all_g, g)) all_g.push_back(g);
  }
  std::sort(all_g.begin(), all_g.end());

  const std::string hash = config.hash();
  std::vector<EnsembleRecord> out;
  auto emit = [&](double g, const std::string& state, Diagnostic d, json payload) {
    EnsembleRecord r;
    r.seed = seed;
    r.n_majorana = n;
    r.g = g;
    r.state_kind = state;
    r.diagnostic = std::string(to_string(d));
    r.realization = realization;
    r.payload = std::move(payload);
    r.code_version = std::string(code_version());
    r.config_hash = hash;
    out.push_back(std::move(r));
  };

  const bool want_middle = std::find(config.states.begin(), config.states.end(), "middle") != config.states.end();
  const bool want_ground = std::find(config.states.begin(), config.states.end(), "ground") != config.states.end();
  for (std::size_t gi = 0; gi < all_g.size(); ++gi) {
    const double g = all_g[gi];
    std::vector<Diagnostic> state_diags, spectrum_diags;
    for (const auto& [d, grid] : grids)
      if (on_grid(grid, g)) (is_state_diagnostic(d) ? state_diags : spectrum_diags).push_back(d);
    const bool states_needed = !state_diags.empty() && (want_ground || want_middle);
    const bool full = !spectrum_diags.empty() || (states_needed && want_middle);

    const SparseHamiltonian h = assemble_sparse(build_interpolated(h4, h2, g), config.memory_budget);
    std::optional<Spectrum> spectrum;
    if (full) {
      spectrum = full_spectrum(h, states_needed);
      spectrum->meta = {seed, n, g};
    }
    for (auto d : spectrum_diags) {
      if (d == Diagnostic::dos) {
        std::vector<double> ev(spectrum->eigenvalues.data(), spectrum->eigenvalues.data() + spectrum->eigenvalues.size());
        emit(g, "spectrum", d, {{"eigenvalues", ev}});
      } else {
        emit(g, "spectrum", d, {{"gap", spectral_gap(*spectrum)}});
      }
    }
    if (!states_needed) continue;
    for (const auto& state : config.states) {
      StateVector psi;
      if (state == "middle") {
        psi = select_eigenstate(*spectrum, EigenstateKind::middle);
      } else if (spectrum) {
        psi = select_eigenstate(*spectrum, EigenstateKind::ground);
      } else {
        LanczosOptions lo;
        lo.seed = splitmix(seed ^ gi);
        psi = StateVector::normalized(ground_state(h, lo).vector);
      }
      const std::uint64_t sre_seed = splitmix(seed ^ (0x5e5eULL << 20) ^ gi ^ (state == "middle" ? 1ULL << 40 : 0));
      for (auto d : state_diags) emit(g, state, d, sd.compute(d, psi, sre_seed));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- scheduling -----------------------------------------------------------------

namespace {

std::size_t estimate_unit_bytes(const ExperimentConfig& c, int n) {
  const PauliSum h4 = build_syk(sample_couplings({n, 4, c.coupling_scale, 0}));
  const PauliSum h2 = build_syk(sample_couplings({n, 2, c.coupling_scale, 0}));
  std::size_t bytes = estimate_sparse_bytes(build_interpolated(h4, h2, 0.5));
  const bool dense = c.diagnostics.count(Diagnostic::dos) || c.diagnostics.count(Diagnostic::gap) ||
                     std::find(c.states.begin(), c.states.end(), "middle") != c.states.end();
  if (dense) {
    // Two parity blocks with vectors, plus solver workspace.
    const std::size_t half = std::size_t{1} << (n / 2 - 1);
    bytes += 6 * half * half * sizeof(cplx);
  }
  return bytes;
}

// Creates `path` only if absent; true when this process owns it.
bool claim(const fs::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "wx");
  if (!f) return false;
  std::fclose(f);
  return true;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, bool resume) {
  config.validate();
  const fs::path root(config.output_dir);
  const fs::path rec_dir = root / "records";
  fs::create_directories(rec_dir);
  {
    std::ofstream cfg(root / "config.json", std::ios::trunc);
    cfg << config.to_json().dump(2) << '\n';
  }
  if (resume)
    for (const auto& e : fs::directory_iterator(rec_dir))
      if (e.path().extension() == ".claim" || e.path().extension() == ".tmp") fs::remove(e.path());

  RunSummary summary;
  std::vector<UnitId> parallel, sequential;
  for (int n : config.n_list) {
    const int m = config.realizations_for(n);
    if (m == 0) continue;
    const std::size_t need = estimate_unit_bytes(config, n);
    for (int r = 0; r < m; ++r) {
      ++summary.units_total;
      const UnitId u{n, r};
      if (fs::exists(rec_dir / (u.name() + ".jsonl"))) {
        ++summary.units_skipped;
        continue;
      }
      if (need > config.memory_budget) {
        summary.pending.push_back(fmt::format("{}: needs about {} bytes, budget {}", u.name(), need,
                                              config.memory_budget));
      } else if (need * static_cast<std::size_t>(config.threads) > config.memory_budget) {
        sequential.push_back(u);
      } else {
        parallel.push_back(u);
      }
    }
  }

  std::mutex mu;
  std::exception_ptr failure;
  auto run_unit = [&](const UnitId& u) {
    const fs::path final_path = rec_dir / (u.name() + ".jsonl");
    const fs::path claim_path = rec_dir / (u.name() + ".claim");
    if (!claim(claim_path)) {
      std::lock_guard lock(mu);
      summary.pending.push_back(u.name() + ": claimed by another process");
      return;
    }
    try {
      ResultStore s;
      s.records = compute_unit(config, u.n, u.r);
      s.write(final_path);
      fs::remove(claim_path);
      std::lock_guard lock(mu);
      ++summary.units_computed;
    } catch (const ResourceError& e) {
      fs::remove(claim_path);
      std::lock_guard lock(mu);
      summary.pending.push_back(u.name() + ": " + e.what());
    } catch (...) {
      fs::remove(claim_path);
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < parallel.size();) run_unit(parallel[i]);
  };
  const int nthreads = std::max(1, std::min<int>(config.threads, static_cast<int>(parallel.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& u : sequential) run_unit(u);
  if (failure) std::rethrow_exception(failure);

  std::sort(summary.pending.begin(), summary.pending.end());
  const ResultStore merged = ResultStore::load_directory(root);
  summary.records_written = merged.records.size();
  summary.store_path = root / "store.jsonl";
  merged.write(summary.store_path);
  if (!summary.pending.empty()) {
    std::ofstream man(root / "manifest.txt", std::ios::trunc);
    for (const auto& p : summary.pending) man << p << '\n';
  } else {
    fs::remove(root / "manifest.txt");
  }
  return summary;
}

}  // namespace syklab
