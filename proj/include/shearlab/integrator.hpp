#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shearlab/lattice.hpp"
#include "shearlab/params.hpp"

namespace shearlab {

/// How the mode window follows the solution.
struct WindowPolicy {
  /// Half-width of the default window around η* when the caller builds one.
  LatticeIndex initial_radius = 16;
  /// The upper edge is kept at least this far above τ; edge growth uses half of it.
  LatticeIndex growth_margin = 32;
  /// Edge amplitude above which the window is widened on that side.
  double edge_tol = 1e-12;
  /// Hard limit on the number of modes.
  std::size_t max_modes = 1u << 14;
  /// false keeps the initial window fixed (pure truncated system).
  bool extend = true;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double max_step = 0.05;
  /// Step cap near a coefficient peak, as a multiple of k.
  double resonance_cap_factor = 0.5;
  /// Half-width of the capped zone around each peak, as a multiple of k.
  double resonance_zone_factor = 10.0;
  std::size_t max_steps = 20'000'000;
  WindowPolicy window{};

  /// Throws std::invalid_argument on non-positive tolerances or factors.
  void validate() const;
};

struct StepResult {
  ModeLattice lattice;
  /// ℓ² norm of the difference between the embedded 5th and 4th order solutions.
  double error_estimate;
};

/// One Dormand–Prince 5(4) step of size dtau. Throws IntegrationError on
/// non-finite output and std::invalid_argument for dtau <= 0.
StepResult step(const ModeLattice& lattice, const Params& params, double dtau);

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Snapshots at strictly increasing times. The first sample is always the
/// initial state and the last is always τ_end.
struct Trajectory {
  std::vector<ModeLattice> samples;
  StepStats stats;
  /// Running maximum of |ω| at the two window edges over accepted steps.
  double boundary_max = 0.0;

  const ModeLattice& initial() const { return samples.front(); }
  const ModeLattice& final() const { return samples.back(); }
};

/// Adaptive integration from lattice.tau() to tau_end.
///
/// Steps land exactly on every requested sample time. Within
/// resonance_zone_factor·k of any lattice peak η the step is capped at
/// resonance_cap_factor·k. Errors: IntegrationError (non-finite state,
/// step collapse, step budget), ResourceError (window limit).
Trajectory integrate(const ModeLattice& lattice, const Params& params,
                     const IntegratorConfig& config, double tau_end,
                     std::span<const double> sample_times = {});

struct GronwallReport {
  bool passed = true;
  /// min over samples of cL²(τ−τ0) − log(‖ω(τ)‖/‖ω0‖); negative means violated.
  double worst_log_margin = 0.0;
  /// max over samples with τ > τ0 of the measured log growth divided by cL²(τ−τ0).
  double saturation = 0.0;
};

/// Checks ‖ω(τ)‖_ℓ² ≤ exp(c·L²·(τ−τ0))·‖ω0‖_ℓ² in log space.
GronwallReport gronwall_check(const Trajectory& trajectory, const Params& params);

}  // namespace shearlab
