#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shearlab/integrator.hpp"
#include "shearlab/lattice.hpp"
#include "shearlab/params.hpp"

namespace shearlab {

/// Parameters of the Fourier weight a(τ,η) = exp(C1·c·arctan(C2·(η−τ))).
struct WeightSpec {
  double C1;
  double C2;
  int order_j = 0;

  /// C1 = 4/k, C2 = 1/k.
  static WeightSpec standard(const Params& params, int order_j = 0);
  void validate() const;
};

/// ⟨η⟩ = (1 + η²)^{1/2}.
double japanese_bracket(double eta) noexcept;

double weight(const WeightSpec& spec, const Params& params, double tau, double eta);

/// a_j(τ,η) = ⟨η⟩^j · a(τ,η) with j = spec.order_j.
double weight_aj(const WeightSpec& spec, const Params& params, double tau, double eta);

/// A_j = a_j + Σ_{j'<j} binom(j,j')·A_{j'}, with A_0 = a and j = spec.order_j.
double weight_Aj(const WeightSpec& spec, const Params& params, double tau, double eta);

/// A_0 … A_{max_j} at one point; entry j is A_j.
std::vector<double> weight_A_all(const WeightSpec& spec, const Params& params, double tau,
                                 double eta, int max_j);

/// Σ_η A_j(τ,η)·|ω(τ,η)|² with j = spec.order_j.
double functional(const ModeLattice& lattice, const WeightSpec& spec, const Params& params);

struct OrderMonitor {
  int order = 0;
  std::vector<double> tau;
  std::vector<double> values;
  /// Largest (F_{n+1} − F_n)/F_n over consecutive samples.
  double max_rel_increase = 0.0;
  bool monotone = true;
};

struct DecayReport {
  /// False when the parameters fail 4 − 2·exp(2cL) > 0; monotonicity is then
  /// reported but not asserted.
  bool precondition_met = false;
  std::optional<std::string> regime_error;
  double tol_rel = 1e-10;
  std::vector<OrderMonitor> orders;

  bool passed() const noexcept;
};

/// Evaluates the functional for orders 0…spec.order_j at every sample and
/// checks F(τ_{n+1}) − F(τ_n) ≤ tol_rel·F(τ_n).
DecayReport decay_monitor(const Trajectory& trajectory, const WeightSpec& spec,
                          const Params& params, double tol_rel = 1e-10);

struct SobolevNorm {
  double s;
};
struct GevreyNorm {
  double C;
};
using NormKind = std::variant<SobolevNorm, GevreyNorm>;

/// Σ ⟨η⟩^{2s}|ω|² or Σ exp(C|η|)|ω|², accumulated in log space.
/// Throws std::overflow_error when the result is not representable.
double norm(const ModeLattice& lattice, const NormKind& kind);

/// Natural log of norm(); −∞ for the zero lattice.
double log_norm(const ModeLattice& lattice, const NormKind& kind);

}  // namespace shearlab
