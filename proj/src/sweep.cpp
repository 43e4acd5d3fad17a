#include "shearlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "shearlab/cascade.hpp"
#include "shearlab/lattice.hpp"
#include "shearlab/params.hpp"

namespace shearlab {

SweepRow sweep_point(double c, double L, const SweepGrid& grid, const IntegratorConfig& config) {
  SweepRow row;
  row.c = c;
  row.L = L;
  row.check = "none";
  row.verdict = std::string(to_string(GrowthVerdict::NotApplicable));
  try {
    const Params params = Params::from_L(c, L, grid.eta_star);
    row.k = params.k();
    const RegimeClassification cls = classify_regime(params);
    row.label = std::string(to_string(cls.label));

    const ModeLattice omega0 = build_lattice(params.eta_star(), params.eta_star(),
                                             params.eta_star(), DeltaInit{params.eta_star()});
    const CascadeReport rep = run_cascade(params, omega0, grid.J, config);
    for (const CascadeStep& st : rep.steps) {
      if (st.ratio) row.max_ratio = std::max(row.max_ratio, *st.ratio);
    }
    row.sup_growth = rep.sup_growth;

    if (cls.label == Regime::Unstable) {
      row.check = "d_growth";
      row.verdict = std::string(to_string(verify_growth(rep).verdict));
    } else if (cls.pathsum_stable || cls.lyapunov_stable) {
      row.check = "bounded";
      row.verdict = rep.sup_growth <= grid.stable_envelope ? "passed" : "failed";
    }
    row.status = "ok";
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const IntegratorConfig& config,
                                unsigned workers) {
  std::vector<std::pair<double, double>> points;
  for (double c : grid.c) {
    for (double L : grid.L) points.emplace_back(c, L);
  }
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      rows[i] = sweep_point(points[i].first, points[i].second, grid, config);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(points.size())));
  if (n == 1) {
    work();
    return rows;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
  pool.clear();
  return rows;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t({"c", "L", "k", "label", "max_ratio", "sup_growth", "check", "verdict", "status"});
  for (const SweepRow& r : rows) {
    t.add_row({format_double(r.c), format_double(r.L), format_double(r.k), r.label,
               format_double(r.max_ratio), format_double(r.sup_growth), r.check, r.verdict,
               r.status});
  }
  return t;
}

}  // namespace shearlab
