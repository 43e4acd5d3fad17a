#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "shearlab/csv.hpp"
#include "shearlab/integrator.hpp"
#include "shearlab/regime.hpp"

namespace shearlab {

struct SweepRow {
  double c = 0.0;
  double L = 0.0;
  double k = 0.0;
  std::string label;
  /// Largest resonant ratio ρ_j of the cascade run.
  double max_ratio = 0.0;
  /// Largest sup-norm relative to the initial one.
  double sup_growth = 0.0;
  /// "d_growth" (unstable), "bounded" (stable) or "none".
  std::string check;
  /// "passed", "failed" or "not_applicable".
  std::string verdict;
  /// "ok" or the error that stopped this point.
  std::string status;
};

struct SweepGrid {
  std::vector<double> c;
  std::vector<double> L;
  std::size_t J = 6;
  double stable_envelope = 2.0;
  double eta_star = 0.0;
};

/// Evaluates one grid point: classification plus a cascade run from δ_{η*}.
/// Errors are captured in the row's status, never thrown.
SweepRow sweep_point(double c, double L, const SweepGrid& grid, const IntegratorConfig& config);

/// All points in c-major grid order. Points run on up to `workers` threads;
/// the result does not depend on the worker count.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const IntegratorConfig& config,
                                unsigned workers);

CsvTable sweep_table(const std::vector<SweepRow>& rows);

}  // namespace shearlab
