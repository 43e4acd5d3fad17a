#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shearlab/integrator.hpp"
#include "shearlab/lattice.hpp"
#include "shearlab/params.hpp"
#include "shearlab/regime.hpp"

namespace shearlab {

/// One sampling time T_j = η* + j − 1/2 of the resonance cascade.
struct CascadeStep {
  std::size_t j = 0;
  double T = 0.0;
  /// |ω(T_j, η* + j)|.
  double resonant_amplitude = 0.0;
  /// max_η |ω(T_j, η)|.
  double sup_amplitude = 0.0;
  /// resonant ≥ 0.5·sup.
  bool dominant = false;
  /// |ω(T_{j+1}, j+1)| / |ω(T_j, j)|; empty for the last step or a zero denominator.
  std::optional<double> ratio;
};

struct CascadeReport {
  Params params;
  Regime regime = Regime::Indeterminate;
  double d_grow = 0.0;
  double r_exact = 0.0;
  std::vector<CascadeStep> steps{};
  std::vector<std::string> warnings{};
  StepStats stats{};
  /// Largest sup-norm over all samples relative to the initial sup-norm.
  double sup_growth = 0.0;
};

/// Integrates ω0, prescribed at T_0 = η* − 1/2, through T_0 … T_{J_max}.
///
/// The window is widened to hold η* + J_max plus the growth margin. A regime
/// other than UNSTABLE, or initial data with |ω0(η*)| < 0.5·max|ω0|, is
/// recorded as a warning and the run proceeds.
CascadeReport run_cascade(const Params& params, const ModeLattice& omega0, std::size_t J_max,
                          const IntegratorConfig& config);

enum class GrowthVerdict { Passed, Failed, NotApplicable };

std::string_view to_string(GrowthVerdict verdict) noexcept;

struct GrowthCheck {
  GrowthVerdict verdict = GrowthVerdict::NotApplicable;
  double d = 0.0;
  /// Smallest |ω(T_j, j)| / d^j over j ≥ 1.
  double worst_margin = 0.0;
};

/// |ω(T_j, j)| ≥ d^j for every recorded j ≥ 1; not applicable when d ≤ 1.
GrowthCheck verify_growth(const CascadeReport& report, double d);
/// Uses d = report.d_grow.
GrowthCheck verify_growth(const CascadeReport& report);

struct ChainComparison {
  /// (cη0)^{k0} / (k0!)².
  double k_chain_factor = 0.0;
  double log_k_chain_factor = 0.0;
  /// exp(√(cη0)).
  double k_chain_optimum = 0.0;
  /// (2πc/k)^t.
  double eta_chain_factor = 0.0;
  double log_eta_chain_factor = 0.0;
};

ChainComparison chain_growth_factors(double c, double eta0, int k0, double k, double t);

}  // namespace shearlab
