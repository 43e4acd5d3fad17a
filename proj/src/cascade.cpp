#include "shearlab/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace shearlab {

CascadeReport run_cascade(const Params& params, const ModeLattice& omega0, std::size_t J_max,
                          const IntegratorConfig& config) {
  if (J_max < 1) throw std::invalid_argument("run_cascade: J_max must be >= 1");
  if (omega0.eta_star() != params.eta_star()) {
    throw std::invalid_argument("run_cascade: lattice offset differs from params.eta_star");
  }
  const double eta_star = params.eta_star();
  const double T0 = eta_star - 0.5;

  CascadeReport rep{.params = params};
  const auto regime = classify_regime(params);
  rep.regime = regime.label;
  rep.d_grow = params.d_grow();
  rep.r_exact = params.r_exact();

  if (regime.label != Regime::Unstable) {
    rep.warnings.push_back(std::string("regime is ") + std::string(to_string(regime.label)) +
                           ", not UNSTABLE; growth is not expected");
  }
  const double sup0 = omega0.sup_norm();
  if (!(std::abs(omega0.at(0)) >= 0.5 * sup0) || sup0 == 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "initial data violates |omega0(eta*)| >= 0.5*max|omega0| (|omega0(eta*)|="
       << std::abs(omega0.at(0)) << ", max=" << sup0 << ")";
    rep.warnings.push_back(os.str());
  }

  const auto J = static_cast<LatticeIndex>(J_max);
  const ModeLattice start =
      omega0.at_time(T0).extended(-config.window.initial_radius, J + config.window.growth_margin);

  std::vector<double> times;
  for (std::size_t j = 1; j <= J_max; ++j) times.push_back(T0 + static_cast<double>(j));
  const Trajectory traj = integrate(start, params, config, times.back(), times);
  rep.stats = traj.stats;

  for (std::size_t j = 0; j <= J_max; ++j) {
    const ModeLattice& s = traj.samples.at(j);
    CascadeStep st;
    st.j = j;
    st.T = s.tau();
    st.resonant_amplitude = std::abs(s.at(static_cast<LatticeIndex>(j)));
    st.sup_amplitude = s.sup_norm();
    st.dominant = st.resonant_amplitude >= 0.5 * st.sup_amplitude;
    rep.steps.push_back(st);
    if (sup0 > 0.0) rep.sup_growth = std::max(rep.sup_growth, st.sup_amplitude / sup0);
  }
  for (std::size_t j = 0; j + 1 < rep.steps.size(); ++j) {
    const double den = rep.steps[j].resonant_amplitude;
    if (den > 0.0) rep.steps[j].ratio = rep.steps[j + 1].resonant_amplitude / den;
  }
  return rep;
}

std::string_view to_string(GrowthVerdict verdict) noexcept {
  switch (verdict) {
    case GrowthVerdict::Passed:
      return "passed";
    case GrowthVerdict::Failed:
      return "failed";
    case GrowthVerdict::NotApplicable:
      return "not_applicable";
  }
  return "not_applicable";
}

GrowthCheck verify_growth(const CascadeReport& report, double d) {
  GrowthCheck out;
  out.d = d;
  if (!(d > 1.0)) return out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (const CascadeStep& st : report.steps) {
    if (st.j == 0) continue;
    const double need = std::pow(d, static_cast<double>(st.j));
    out.worst_margin = std::min(out.worst_margin, st.resonant_amplitude / need);
    if (!(st.resonant_amplitude >= need)) ok = false;
  }
  out.verdict = ok ? GrowthVerdict::Passed : GrowthVerdict::Failed;
  return out;
}

GrowthCheck verify_growth(const CascadeReport& report) { return verify_growth(report, report.d_grow); }

ChainComparison chain_growth_factors(double c, double eta0, int k0, double k, double t) {
  if (k0 < 1) throw std::invalid_argument("chain_growth_factors: k0 must be >= 1");
  if (!(c > 0.0) || !(eta0 > 0.0) || !(k > 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("chain_growth_factors: c, eta0, k must be positive and t >= 0");
  }
  ChainComparison out;
  const double kd = static_cast<double>(k0);
  out.log_k_chain_factor = kd * std::log(c * eta0) - 2.0 * std::lgamma(kd + 1.0);
  out.k_chain_factor = k0 == 1 ? c * eta0 : std::exp(out.log_k_chain_factor);
  out.k_chain_optimum = std::exp(std::sqrt(c * eta0));
  out.log_eta_chain_factor = t * std::log(2.0 * std::numbers::pi * c / k);
  out.eta_chain_factor = std::exp(out.log_eta_chain_factor);
  return out;
}

}  // namespace shearlab
