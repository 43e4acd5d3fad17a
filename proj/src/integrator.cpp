#include "shearlab/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "shearlab/errors.hpp"

namespace shearlab {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr std::array<double, 7> kNodes{0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr std::array<std::array<double, 6>, 7> kA{{
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5.0, 0, 0, 0, 0, 0},
    {3.0 / 40.0, 9.0 / 40.0, 0, 0, 0, 0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0, 0, 0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0, 0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
}};
constexpr std::array<double, 7> kB{35.0 / 384.0,     0.0,          500.0 / 1113.0, 125.0 / 192.0,
                                   -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
// kB minus the embedded 4th order weights.
constexpr std::array<double, 7> kE{71.0 / 57600.0,      0.0,           -71.0 / 16695.0, 71.0 / 1920.0,
                                   -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};

struct Workspace {
  std::array<std::vector<Complex>, 7> stages;
  std::vector<Complex> tmp;
  std::vector<double> coeff;
};

// Advances y (window starting at `first`) from tau by h; writes the 5th order
// solution to y_out and returns the ℓ² norm of the embedded error.
double dp_step(const Params& params, double eta_star, LatticeIndex first, double tau,
               std::span<const Complex> y, double h, Workspace& ws, std::vector<Complex>& y_out) {
  const std::size_t n = y.size();
  ws.tmp.resize(n);
  for (std::size_t s = 0; s < 7; ++s) {
    if (s == 0) {
      rhs_into(params, eta_star, first, tau, y, ws.coeff, ws.stages[0]);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = y[i];
      for (std::size_t m = 0; m < s; ++m) {
        if (kA[s][m] != 0.0) acc += h * kA[s][m] * ws.stages[m][i];
      }
      ws.tmp[i] = acc;
    }
    rhs_into(params, eta_star, first, tau + kNodes[s] * h, ws.tmp, ws.coeff, ws.stages[s]);
  }
  y_out.resize(n);
  double err2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc = y[i];
    Complex err{0.0, 0.0};
    for (std::size_t m = 0; m < 7; ++m) {
      if (kB[m] != 0.0) acc += h * kB[m] * ws.stages[m][i];
      if (kE[m] != 0.0) err += h * kE[m] * ws.stages[m][i];
    }
    y_out[i] = acc;
    err2 += std::norm(err);
  }
  return std::sqrt(err2);
}

bool all_finite(std::span<const Complex> y) {
  return std::all_of(y.begin(), y.end(), [](const Complex& w) {
    return std::isfinite(w.real()) && std::isfinite(w.imag());
  });
}

double l2(std::span<const Complex> y) {
  double s = 0.0;
  for (const Complex& w : y) s += std::norm(w);
  return std::sqrt(s);
}

// Largest step allowed by the resonance cap when starting at tau.
double resonance_limit(const IntegratorConfig& cfg, const Params& params, double eta_star,
                       LatticeIndex first, LatticeIndex last, double tau) {
  const double k = params.k();
  const double zone = cfg.resonance_zone_factor * k;
  const double cap = cfg.resonance_cap_factor * k;
  const double rel = tau - eta_star;
  const auto peak_in_window = [&](double n) {
    return n >= static_cast<double>(first) && n <= static_cast<double>(last);
  };

  const double nearest = std::round(rel);
  if (std::abs(rel - nearest) < zone && peak_in_window(nearest)) return cap;

  // Do not jump over the next capped zone.
  const double next = std::floor(rel) + 1.0;
  if (!peak_in_window(next)) return std::numeric_limits<double>::infinity();
  const double zone_start = eta_star + next - zone;
  return std::max(zone_start - tau, cap);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
  }
  if (!(max_step > 0.0)) throw std::invalid_argument("IntegratorConfig: max_step must be positive");
  if (!(resonance_cap_factor > 0.0) || !(resonance_zone_factor >= 0.0)) {
    throw std::invalid_argument("IntegratorConfig: resonance factors must be positive");
  }
  if (window.growth_margin < 1 || window.initial_radius < 0) {
    throw std::invalid_argument("IntegratorConfig: window margins must be positive");
  }
  if (!(window.edge_tol > 0.0)) throw std::invalid_argument("IntegratorConfig: edge_tol must be positive");
  if (window.max_modes < 1) throw std::invalid_argument("IntegratorConfig: max_modes must be positive");
}

StepResult step(const ModeLattice& lattice, const Params& params, double dtau) {
  if (!(dtau > 0.0)) throw std::invalid_argument("step: dtau must be positive");
  Workspace ws;
  std::vector<Complex> out;
  const double err = dp_step(params, lattice.eta_star(), lattice.first(), lattice.tau(),
                             lattice.amplitudes(), dtau, ws, out);
  if (!all_finite(out) || !std::isfinite(err)) {
    throw IntegrationError("step: non-finite amplitudes");
  }
  return {lattice.evolved(lattice.tau() + dtau, std::move(out)), err};
}

Trajectory integrate(const ModeLattice& lattice, const Params& params,
                     const IntegratorConfig& config, double tau_end,
                     std::span<const double> sample_times) {
  config.validate();
  const double tau0 = lattice.tau();
  if (!(tau_end > tau0)) throw std::invalid_argument("integrate: tau_end must exceed lattice.tau");

  std::vector<double> targets;
  for (double t : sample_times) {
    if (!(t >= tau0 && t <= tau_end)) {
      throw std::invalid_argument("integrate: sample time outside [tau, tau_end]");
    }
    if (t > tau0) targets.push_back(t);
  }
  targets.push_back(tau_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  const WindowPolicy& wp = config.window;
  const double eta_star = lattice.eta_star();
  LatticeIndex first = lattice.first();
  std::vector<Complex> y(lattice.amplitudes().begin(), lattice.amplitudes().end());

  Trajectory traj;
  traj.samples.push_back(lattice);

  const auto resize_window = [&](LatticeIndex new_first, LatticeIndex new_last) {
    const LatticeIndex last = first + static_cast<LatticeIndex>(y.size()) - 1;
    new_first = std::min(new_first, first);
    new_last = std::max(new_last, last);
    if (new_first == first && new_last == last) return;
    const auto size = static_cast<std::size_t>(new_last - new_first + 1);
    if (size > wp.max_modes) {
      std::ostringstream os;
      os << "integrate: window [" << new_first << ", " << new_last << "] exceeds max_modes="
         << wp.max_modes;
      throw ResourceError(os.str());
    }
    std::vector<Complex> grown(size, Complex{0.0, 0.0});
    std::copy(y.begin(), y.end(), grown.begin() + static_cast<std::ptrdiff_t>(first - new_first));
    y = std::move(grown);
    first = new_first;
  };

  const auto manage_window = [&](double tau) {
    if (!wp.extend) return;
    const LatticeIndex last = first + static_cast<LatticeIndex>(y.size()) - 1;
    const LatticeIndex chunk = std::max<LatticeIndex>(1, wp.growth_margin / 2);
    LatticeIndex new_first = first;
    LatticeIndex new_last = last;
    const auto ahead = static_cast<LatticeIndex>(std::ceil(tau - eta_star)) + wp.growth_margin;
    if (new_last < ahead) new_last = ahead;
    if (std::abs(y.front()) > wp.edge_tol) new_first = first - chunk;
    if (std::abs(y.back()) > wp.edge_tol) new_last = std::max(new_last, last + chunk);
    resize_window(new_first, new_last);
  };

  manage_window(tau0);

  Workspace ws;
  std::vector<Complex> y_new;
  double tau = tau0;
  double h = config.max_step;
  std::size_t target_idx = 0;

  while (target_idx < targets.size()) {
    const double target = targets[target_idx];
    const LatticeIndex last = first + static_cast<LatticeIndex>(y.size()) - 1;
    double h_try = std::min({h, config.max_step,
                             resonance_limit(config, params, eta_star, first, last, tau)});
    bool lands = false;
    if (tau + h_try >= target - 1e-13 * std::max(1.0, std::abs(target))) {
      h_try = target - tau;
      lands = true;
    }
    if (!(h_try > 1e-14 * std::max(1.0, std::abs(tau)))) {
      std::ostringstream os;
      os.precision(17);
      os << "integrate: step size collapsed at tau=" << tau;
      throw IntegrationError(os.str());
    }
    if (traj.stats.accepted + traj.stats.rejected >= config.max_steps) {
      throw IntegrationError("integrate: step budget exhausted");
    }

    const double err = dp_step(params, eta_star, first, tau, y, h_try, ws, y_new);
    if (!std::isfinite(err) || !all_finite(y_new)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrate: non-finite state at tau=" << tau;
      throw IntegrationError(os.str());
    }
    const double scale = config.abs_tol + config.rel_tol * std::max(l2(y), l2(y_new));
    const double ratio = err / scale;
    if (ratio > 1.0) {
      ++traj.stats.rejected;
      h = 0.5 * h_try;
      continue;
    }

    ++traj.stats.accepted;
    y.swap(y_new);
    tau = lands ? target : tau + h_try;
    traj.boundary_max = std::max({traj.boundary_max, std::abs(y.front()), std::abs(y.back())});

    const double grow = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    if (!lands || h_try >= h) h = h_try * grow;

    if (lands) {
      traj.samples.emplace_back(tau, eta_star, first, y);
      ++target_idx;
    }
    manage_window(tau);
  }
  return traj;
}

GronwallReport gronwall_check(const Trajectory& trajectory, const Params& params) {
  GronwallReport rep;
  if (trajectory.samples.empty()) return rep;
  const ModeLattice& init = trajectory.initial();
  const double norm0 = init.l2_norm();
  const double rate = params.c() * params.L() * params.L();
  rep.worst_log_margin = std::numeric_limits<double>::infinity();

  for (const ModeLattice& s : trajectory.samples) {
    const double elapsed = s.tau() - init.tau();
    const double envelope = rate * elapsed;
    const double norm = s.l2_norm();
    double measured;
    if (norm0 == 0.0) {
      measured = norm == 0.0 ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
    } else {
      measured = norm == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(norm / norm0);
    }
    const double margin = envelope - measured;
    rep.worst_log_margin = std::min(rep.worst_log_margin, margin);
    if (envelope > 0.0 && std::isfinite(measured)) {
      rep.saturation = std::max(rep.saturation, measured / envelope);
    }
  }
  // Rounding in the norms allows a few ulps of apparent growth at τ0.
  rep.passed = rep.worst_log_margin >= -1e-12;
  return rep;
}

}  // namespace shearlab
