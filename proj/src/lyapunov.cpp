#include "shearlab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "shearlab/regime.hpp"

namespace shearlab {

namespace {

constexpr int kMaxOrder = 60;

// Row j of Pascal's triangle, exact in 64-bit for j <= 60.
std::vector<std::uint64_t> binomial_row(int j) {
  std::vector<std::uint64_t> row(static_cast<std::size_t>(j) + 1, 1);
  for (int i = 1; i < j; ++i) {
    row[static_cast<std::size_t>(i)] =
        row[static_cast<std::size_t>(i - 1)] * static_cast<std::uint64_t>(j - i + 1) /
        static_cast<std::uint64_t>(i);
  }
  return row;
}

double log_weight(const NormKind& kind, double eta) {
  if (const auto* s = std::get_if<SobolevNorm>(&kind)) {
    return 2.0 * s->s * std::log(japanese_bracket(eta));
  }
  return std::get<GevreyNorm>(kind).C * std::abs(eta);
}

void check_kind(const NormKind& kind) {
  if (const auto* s = std::get_if<SobolevNorm>(&kind)) {
    if (!(s->s >= 0.0)) throw std::invalid_argument("norm: Sobolev order must be >= 0");
  } else if (!(std::get<GevreyNorm>(kind).C >= 0.0)) {
    throw std::invalid_argument("norm: Gevrey constant must be >= 0");
  }
}

}  // namespace

WeightSpec WeightSpec::standard(const Params& params, int order_j) {
  return {4.0 / params.k(), 1.0 / params.k(), order_j};
}

void WeightSpec::validate() const {
  if (!(C1 > 0.0) || !(C2 > 0.0)) throw std::invalid_argument("WeightSpec: C1, C2 must be positive");
  if (order_j < 0 || order_j > kMaxOrder) {
    throw std::invalid_argument("WeightSpec: order_j must lie in [0, 60]");
  }
}

double japanese_bracket(double eta) noexcept { return std::sqrt(1.0 + eta * eta); }

double weight(const WeightSpec& spec, const Params& params, double tau, double eta) {
  return std::exp(spec.C1 * params.c() * std::atan(spec.C2 * (eta - tau)));
}

double weight_aj(const WeightSpec& spec, const Params& params, double tau, double eta) {
  return std::pow(japanese_bracket(eta), spec.order_j) * weight(spec, params, tau, eta);
}

std::vector<double> weight_A_all(const WeightSpec& spec, const Params& params, double tau,
                                 double eta, int max_j) {
  if (max_j < 0 || max_j > kMaxOrder) throw std::invalid_argument("weight_A_all: bad order");
  const double a = weight(spec, params, tau, eta);
  const double bracket = japanese_bracket(eta);
  std::vector<double> A(static_cast<std::size_t>(max_j) + 1);
  A[0] = a;
  double bracket_pow = 1.0;
  for (int j = 1; j <= max_j; ++j) {
    bracket_pow *= bracket;
    const auto binom = binomial_row(j);
    double acc = bracket_pow * a;
    for (int jp = 0; jp < j; ++jp) {
      acc += static_cast<double>(binom[static_cast<std::size_t>(jp)]) * A[static_cast<std::size_t>(jp)];
    }
    A[static_cast<std::size_t>(j)] = acc;
  }
  return A;
}

double weight_Aj(const WeightSpec& spec, const Params& params, double tau, double eta) {
  return weight_A_all(spec, params, tau, eta, spec.order_j).back();
}

double functional(const ModeLattice& lattice, const WeightSpec& spec, const Params& params) {
  spec.validate();
  double sum = 0.0;
  const auto amps = lattice.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double m = std::norm(amps[i]);
    if (m == 0.0) continue;
    sum += weight_Aj(spec, params, lattice.tau(), lattice.eta_at(i)) * m;
  }
  return sum;
}

bool DecayReport::passed() const noexcept {
  if (!precondition_met) return false;
  return std::all_of(orders.begin(), orders.end(), [](const OrderMonitor& o) { return o.monotone; });
}

DecayReport decay_monitor(const Trajectory& trajectory, const WeightSpec& spec,
                          const Params& params, double tol_rel) {
  spec.validate();
  DecayReport rep;
  rep.tol_rel = tol_rel;
  rep.precondition_met = classify_regime(params).lyapunov_stable;
  if (!rep.precondition_met) {
    rep.regime_error = "4 - 2*exp(2*c*L) <= 0: Lyapunov monotonicity is not guaranteed";
  }

  for (int j = 0; j <= spec.order_j; ++j) {
    OrderMonitor mon;
    mon.order = j;
    WeightSpec sj = spec;
    sj.order_j = j;
    for (const ModeLattice& s : trajectory.samples) {
      mon.tau.push_back(s.tau());
      mon.values.push_back(functional(s, sj, params));
    }
    for (std::size_t n = 1; n < mon.values.size(); ++n) {
      const double prev = mon.values[n - 1];
      const double diff = mon.values[n] - prev;
      const double rel = prev > 0.0 ? diff / prev : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      mon.max_rel_increase = std::max(mon.max_rel_increase, rel);
      if (diff > tol_rel * prev) mon.monotone = false;
    }
    rep.orders.push_back(std::move(mon));
  }
  return rep;
}

double log_norm(const ModeLattice& lattice, const NormKind& kind) {
  check_kind(kind);
  const auto amps = lattice.amplitudes();
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(amps.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double m = std::norm(amps[i]);
    if (m == 0.0) continue;
    terms[i] = log_weight(kind, lattice.eta_at(i)) + std::log(m);
    top = std::max(top, terms[i]);
  }
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double t : terms) {
    if (std::isfinite(t)) acc += std::exp(t - top);
  }
  return top + std::log(acc);
}

double norm(const ModeLattice& lattice, const NormKind& kind) {
  check_kind(kind);
  double sum = 0.0;
  const auto amps = lattice.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double m = std::norm(amps[i]);
    if (m == 0.0) continue;
    sum += std::exp(log_weight(kind, lattice.eta_at(i))) * m;
  }
  if (std::isfinite(sum)) return sum;

  const double lg = log_norm(lattice, kind);
  const double value = std::exp(lg);
  if (!std::isfinite(value)) {
    throw std::overflow_error("norm: weighted norm overflows double (log value " +
                              std::to_string(lg) + ")");
  }
  return value;
}

}  // namespace shearlab
