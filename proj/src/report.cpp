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
#include <functional>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "syklab/entanglement.hpp"
#include "syklab/errors.hpp"
#include "syklab/ess.hpp"
#include "syklab/fitting.hpp"
#include "syklab/sre.hpp"

namespace syklab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// (N, state, g in 1e-9 units) -> payloads over realizations.
using Group = std::map<std::tuple<int, std::string, long long>, std::vector<const json*>>;

Group group(const ResultStore& store, std::string_view diagnostic) {
  Group out;
  for (const auto& r : store.records)
    if (r.diagnostic == diagnostic)
      out[{r.n_majorana, r.state_kind, std::llround(r.g * 1e9)}].push_back(&r.payload);
  return out;
}

double g_of(long long key) { return static_cast<double>(key) / 1e9; }

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0};
}

std::vector<double> scalars(const std::vector<const json*>& ps, const char* field) {
  std::vector<double> v;
  for (const auto* p : ps) v.push_back(p->at(field).get<double>());
  return v;
}

std::vector<double> averaged_vector(const std::vector<const json*>& ps, const char* field) {
  std::vector<double> avg;
  for (const auto* p : ps) {
    const auto v = p->at(field).get<std::vector<double>>();
    if (avg.empty()) avg.assign(v.size(), 0.0);
    if (v.size() != avg.size()) throw IntegrityError("inconsistent vector lengths in records");
    for (std::size_t i = 0; i < v.size(); ++i) avg[i] += v[i];
  }
  for (double& x : avg) x /= static_cast<double>(ps.size());
  return avg;
}

class Writer {
 public:
  Writer(const fs::path& dir, ReportResult& result) : dir_(dir), result_(result) {}
  std::ofstream open(const std::string& name) {
    fs::create_directories(dir_);
    const fs::path p = dir_ / name;
    result_.files.push_back(p);
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  }

 private:
  fs::path dir_;
  ReportResult& result_;
};

// Gnuplot script: one curve per (N, state) with optional error bars.
std::string gnuplot(const std::string& csv, const std::string& png, const std::string& xlabel,
                    const std::string& ylabel, const std::set<std::pair<int, std::string>>& series,
                    int xcol, int ycol, int ecol, const std::string& refs) {
  std::string s = fmt::format(
      "set datafile separator ','\nset terminal pngcairo size 900,600\nset output '{}'\n"
      "set xlabel '{}'\nset ylabel '{}'\nset key outside right\n",
      png, xlabel, ylabel);
  std::vector<std::string> parts;
  for (const auto& [n, state] : series) {
    const std::string sel = fmt::format("(($1=={} && strcol(2) eq '{}') ? ${} : 1/0)", n, state, ycol);
    if (ecol > 0)
      parts.push_back(fmt::format("'{}' skip 1 using {}:{}:{} with yerrorlines title 'N={} {}'", csv, xcol,
                                  sel, ecol, n, state));
    else
      parts.push_back(fmt::format("'{}' skip 1 using {}:{} with lines title 'N={} {}'", csv, xcol, sel, n, state));
  }
  if (!refs.empty()) parts.push_back(refs);
  s += "plot ";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", \\\n     " : "") + parts[i];
  return s + "\n";
}

// Shared layout for scalar-vs-g figures.
void scalar_figure(const Group& groups, const std::string& stem, const std::string& ylabel,
                   Writer& w, const std::function<std::string(int, int, double)>& extra_cols,
                   const std::string& extra_header, const std::string& refs, bool magnitude = false) {
  auto csv = w.open(stem + ".csv");
  csv << "N,state,g,mean,std,realizations" << extra_header << "\n";
  std::set<std::pair<int, std::string>> series;
  for (const auto& [key, ps] : groups) {
    const auto& [n, state, gk] = key;
    auto [m, s] = mean_std(scalars(ps, "mean"));
    if (magnitude) m = std::abs(m);
    const int r = ps.front()->value("R", n / 4);
    csv << fmt::format("{},{},{:.6f},{:.12g},{:.12g},{}", n, state, g_of(gk), m, s, ps.size())
        << extra_cols(n, r, m) << "\n";
    series.insert({n, state});
  }
  auto gp = w.open(stem + ".gp");
  gp << gnuplot(stem + ".csv", stem + ".png", "g", ylabel, series, 3, 4, 5, refs);
}

}  // namespace

std::string_view to_string(Figure f) {
  switch (f) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
    case Figure::fig6: return "fig6";
    case Figure::dos: return "dos";
    case Figure::gap: return "gap";
  }
  return "unknown";
}

Figure parse_figure(std::string_view name) {
  for (auto f : {Figure::fig1, Figure::fig2, Figure::fig3, Figure::fig4, Figure::fig5, Figure::fig6,
                 Figure::dos, Figure::gap})
    if (to_string(f) == name) return f;
  throw ArgumentError("unknown figure '" + std::string(name) + "'");
}

ReportResult emit_report(const ResultStore& store, Figure figure, const fs::path& out_dir) {
  ReportResult result;
  static const std::map<Figure, std::string> needs{
      {Figure::fig1, "entropy"}, {Figure::fig2, "rdm_curve"}, {Figure::fig3, "kl_fidelity"},
      {Figure::fig4, "ess"},     {Figure::fig5, "sre"},       {Figure::fig6, "capacity"},
      {Figure::dos, "dos"},      {Figure::gap, "gap"}};
  const std::string diag = needs.at(figure);
  const Group groups = group(store, diag);
  if (groups.empty()) {
    result.missing.push_back(fmt::format("{}: no '{}' records; run with --diagnostics {}", to_string(figure),
                                         diag, diag));
    return result;
  }
  Writer w(out_dir, result);
  const std::string stem(to_string(figure));

  switch (figure) {
    case Figure::fig1:
      scalar_figure(
          groups, stem, "S_1", w,
          [](int n, int r, double m) {
            const double page = page_entropy_exact(n / 2, r);
            const double f = static_cast<double>(r) / (n / 2);
            return fmt::format(",{:.12g},{:.12g},{:.12g}", page, m / page,
                               syk2_reference(Syk2ReferenceKind::mean_entropy, r, f));
          },
          ",page,rescaled,syk2_reference", "");
      break;
    case Figure::fig6: {
      const double haar = haar_reference({HaarReferenceKind::capacity});
      // Capacity is stored with its negative sign; the figure shows |C_E|.
      scalar_figure(groups, stem, "|C_E|", w,
                    [&](int, int, double) { return fmt::format(",{:.12g}", std::abs(haar)); }, ",haar",
                    fmt::format("{} with lines dt 2 title 'Haar'", std::abs(haar)), true);
      const Group af = group(store, "antiflatness");
      if (!af.empty()) {
        const double ref = haar_reference({HaarReferenceKind::log_antiflatness});
        scalar_figure(
            af, stem + "_antiflatness", "F", w,
            [&](int n, int r, double) {
              const double f = static_cast<double>(r) / (n / 2);
              return fmt::format(",{:.12g},{:.12g}", ref,
                                 syk2_reference(Syk2ReferenceKind::log_antiflatness, r, f));
            },
            ",haar,syk2_reference", fmt::format("{} with lines dt 2 title 'Haar'", ref));
      }
      break;
    }
    case Figure::fig2: {
      auto csv = w.open(stem + ".csv");
      csv << "N,state,g,k,x,eta,mp_eta\n";
      std::set<std::pair<int, std::string>> series;
      for (const auto& [key, ps] : groups) {
        const auto& [n, state, gk] = key;
        EntanglementSpectrum es;
        es.eigenvalues = averaged_vector(ps, "eigenvalues");
        es.n_qubits = n / 2;
        es.subsystem_size = half_subsystem(n / 2);
        const auto curve = normalized_rdm_curve(es);
        for (std::size_t k = 0; k < curve.size(); ++k)
          csv << fmt::format("{},{},{:.6f},{},{:.12g},{:.12g},{:.12g}\n", n, state, g_of(gk), k + 1,
                             curve[k].first, curve[k].second, marchenko_pastur_eta(curve[k].first));
        series.insert({n, state});
      }
      auto gp = w.open(stem + ".gp");
      gp << gnuplot(stem + ".csv", stem + ".png", "x", "eta", series, 5, 6, 0,
                    "'" + stem + ".csv' skip 1 using 5:7 with lines dt 2 title 'Marchenko-Pastur'");
      break;
    }
    case Figure::fig3: {
      std::map<std::pair<int, std::string>, std::map<double, std::vector<double>>> curves;
      for (const auto& [key, ps] : groups) {
        const auto& [n, state, gk] = key;
        curves[{n, state}][g_of(gk)] = averaged_vector(ps, "eigenvalues");
      }
      auto csv = w.open(stem + ".csv");
      auto tr = w.open(stem + "_transitions.csv");
      csv << "N,state,g,divergence,rescaled\n";
      tr << "N,state,g_c,at_boundary\n";
      std::set<std::pair<int, std::string>> series;
      std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> gc;
      for (const auto& [id, c] : curves) {
        if (c.size() < 2) continue;
        double eps = 1.0;
        for (auto it = std::next(c.begin()); it != c.end(); ++it)
          eps = std::min(eps, it->first - std::prev(it)->first);
        const auto raw = kl_fidelity_scan(c, eps);
        const auto scaled = rescale_fidelity(raw);
        for (std::size_t i = 0; i < raw.size(); ++i)
          csv << fmt::format("{},{},{:.6f},{:.12g},{:.12g}\n", id.first, id.second, raw[i].g,
                             raw[i].divergence, scaled[i].divergence);
        series.insert(id);
        if (scaled.size() > 12) {
          const auto t = transition_point(scaled);
          tr << fmt::format("{},{},{:.6f},{}\n", id.first, id.second, t.g_c, t.at_boundary ? 1 : 0);
          if (!t.at_boundary) {
            gc[id.second].first.push_back(id.first);
            gc[id.second].second.push_back(t.g_c);
          }
        }
      }
      auto fits = w.open(stem + "_scaling.json");
      json j = json::object();
      for (const auto& [state, xy] : gc)
        if (xy.first.size() >= 3) j[state] = json::parse(to_json(power_law_fit(xy.first, xy.second)));
      fits << j.dump(2) << "\n";
      auto gp = w.open(stem + ".gp");
      gp << gnuplot(stem + ".csv", stem + ".png", "g", "rescaled KL fidelity", series, 3, 5, 0, "");
      break;
    }
    case Figure::fig4: {
      auto csv = w.open(stem + ".csv");
      auto kl = w.open(stem + "_kl.csv");
      csv << "N,state,g,r_lo,r_hi,density,poisson,wd_goe,wd_gue,wd_gse\n";
      kl << "N,state,g,kl_poisson,kl_wd_goe,kl_wd_gue,kl_wd_gse,mean_min_max\n";
      const ReferenceKind kinds[] = {ReferenceKind::poisson, ReferenceKind::wd_goe, ReferenceKind::wd_gue,
                                     ReferenceKind::wd_gse};
      std::set<std::pair<int, std::string>> series;
      for (const auto& [key, ps] : groups) {
        const auto& [n, state, gk] = key;
        std::vector<double> counts;
        long long excluded = 0, total = 0;
        double mm = 0.0;
        for (const auto* p : ps) {
          const auto c = p->at("counts").get<std::vector<double>>();
          if (counts.empty()) counts.assign(c.size(), 0.0);
          for (std::size_t i = 0; i < c.size(); ++i) counts[i] += c[i];
          excluded += p->at("excluded").get<long long>();
          total += p->at("total").get<long long>();
          mm += p->at("mean_min_max").get<double>();
        }
        const double cutoff = ps.front()->at("cutoff").get<double>();
        const std::size_t bins = counts.size();
        HistogramPDF h;
        h.n_samples = static_cast<std::size_t>(total - excluded);
        h.excluded = static_cast<std::size_t>(excluded);
        for (std::size_t i = 0; i <= bins; ++i) h.bin_edges.push_back(cutoff * static_cast<double>(i) / static_cast<double>(bins));
        for (std::size_t i = 0; i < bins; ++i)
          h.densities.push_back(h.n_samples ? counts[i] / (static_cast<double>(h.n_samples) * h.width(i)) : 0.0);
        for (std::size_t i = 0; i < bins; ++i) {
          const double mid = 0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]);
          csv << fmt::format("{},{},{:.6f},{:.6g},{:.6g},{:.12g}", n, state, g_of(gk), h.bin_edges[i],
                             h.bin_edges[i + 1], h.densities[i]);
          for (auto k : kinds) csv << fmt::format(",{:.12g}", reference_pdf(k, mid));
          csv << "\n";
        }
        kl << fmt::format("{},{},{:.6f}", n, state, g_of(gk));
        for (auto k : kinds) kl << fmt::format(",{:.12g}", h.n_samples ? kl_divergence(h, k) : 0.0);
        kl << fmt::format(",{:.12g}\n", mm / static_cast<double>(ps.size()));
        series.insert({n, state});
      }
      auto gp = w.open(stem + ".gp");
      gp << gnuplot(stem + ".csv", stem + ".png", "r", "P(r)", series, 4, 6, 0,
                    "'" + stem + ".csv' skip 1 using 4:7 with lines dt 2 title 'Poisson', '" + stem +
                        ".csv' skip 1 using 4:8 with lines dt 3 title 'GOE', '" + stem +
                        ".csv' skip 1 using 4:9 with lines dt 4 title 'GUE', '" + stem +
                        ".csv' skip 1 using 4:10 with lines dt 5 title 'GSE'");
      break;
    }
    case Figure::fig5: {
      auto csv = w.open(stem + ".csv");
      csv << "N,state,g,mean,std,mean_std_error,realizations,haar,gs_fit,ms_fit,golden\n";
      std::set<std::pair<int, std::string>> series;
      for (const auto& [key, ps] : groups) {
        const auto& [n, state, gk] = key;
        const auto [m, s] = mean_std(scalars(ps, "value"));
        const auto [se, se_s] = mean_std(scalars(ps, "std_error"));
        (void)se_s;
        const int q = n / 2;
        csv << fmt::format("{},{},{:.6f},{:.12g},{:.12g},{:.12g},{},{:.12g},{:.12g},{:.12g},{:.12g}\n", n, state,
                           g_of(gk), m, s, se, ps.size(), sre_reference(SREReferenceKind::haar, q),
                           sre_reference(SREReferenceKind::gs_fit, q), sre_reference(SREReferenceKind::ms_fit, q),
                           sre_reference(SREReferenceKind::golden, q));
        series.insert({n, state});
      }
      auto gp = w.open(stem + ".gp");
      gp << gnuplot(stem + ".csv", stem + ".png", "g", "M_2", series, 3, 4, 5, "");
      break;
    }
    case Figure::dos: {
      std::map<std::pair<int, long long>, std::vector<double>> pooled;
      for (const auto& [key, ps] : groups)
        for (const auto* p : ps) {
          const auto ev = p->at("eigenvalues").get<std::vector<double>>();
          auto& v = pooled[{std::get<0>(key), std::get<2>(key)}];
          v.insert(v.end(), ev.begin(), ev.end());
        }
      auto csv = w.open(stem + ".csv");
      csv << "N,g,e_lo,e_hi,density\n";
      std::set<std::pair<int, std::string>> series;
      for (const auto& [key, ev] : pooled) {
        const auto [lo, hi] = std::minmax_element(ev.begin(), ev.end());
        const double a = *lo, b = *hi > *lo ? *hi : *lo + 1.0;
        const auto h = make_histogram(ev, 100, a, b + 1e-12 * std::abs(b));
        for (std::size_t i = 0; i < h.bins(); ++i)
          csv << fmt::format("{},{:.6f},{:.12g},{:.12g},{:.12g}\n", key.first, g_of(key.second), h.bin_edges[i],
                             h.bin_edges[i + 1], h.densities[i]);
      }
      auto gp = w.open(stem + ".gp");
      gp << "set datafile separator ','\nset terminal pngcairo size 900,600\nset output 'dos.png'\n"
            "set xlabel 'E'\nset ylabel 'density'\nplot 'dos.csv' skip 1 using 3:5 with steps title 'DOS'\n";
      break;
    }
    case Figure::gap: {
      auto csv = w.open(stem + ".csv");
      csv << "N,state,g,mean,std,realizations\n";
      std::set<std::pair<int, std::string>> series;
      for (const auto& [key, ps] : groups) {
        const auto& [n, state, gk] = key;
        const auto [m, s] = mean_std(scalars(ps, "gap"));
        csv << fmt::format("{},{},{:.6f},{:.12g},{:.12g},{}\n", n, state, g_of(gk), m, s, ps.size());
        series.insert({n, state});
      }
      auto gp = w.open(stem + ".gp");
      gp << gnuplot(stem + ".csv", stem + ".png", "g", "spectral gap", series, 3, 4, 5, "");
      break;
    }
  }
  return result;
}

}  // namespace syklab
