#include "shearlab/lattice.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace shearlab {

std::optional<LatticeIndex> lattice_index(double eta_star, double eta) {
  const double offset = eta - eta_star;
  const double n = std::round(offset);
  if (!std::isfinite(offset) || std::abs(offset - n) > 1e-9 * std::max(1.0, std::abs(offset))) {
    return std::nullopt;
  }
  return static_cast<LatticeIndex>(n);
}

ModeLattice::ModeLattice(double tau, double eta_star, LatticeIndex first,
                         std::vector<Complex> amplitudes)
    : tau_(tau), eta_star_(eta_star), first_(first), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw std::invalid_argument("ModeLattice: empty window");
  if (!std::isfinite(tau_)) throw std::invalid_argument("ModeLattice: non-finite time");
  if (!(eta_star_ >= 0.0 && eta_star_ < 1.0)) {
    throw std::invalid_argument("ModeLattice: eta_star must lie in [0,1)");
  }
  for (const Complex& w : amplitudes_) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
      throw std::invalid_argument("ModeLattice: non-finite amplitude");
    }
  }
}

Complex ModeLattice::at(LatticeIndex n) const noexcept {
  if (!contains(n)) return {0.0, 0.0};
  return amplitudes_[static_cast<std::size_t>(n - first_)];
}

ModeLattice ModeLattice::evolved(double tau, std::vector<Complex> amplitudes) const {
  if (amplitudes.size() != amplitudes_.size()) {
    throw std::invalid_argument("ModeLattice::evolved: window size mismatch");
  }
  return ModeLattice(tau, eta_star_, first_, std::move(amplitudes));
}

ModeLattice ModeLattice::extended(LatticeIndex first, LatticeIndex last) const {
  const LatticeIndex lo = std::min(first, first_);
  const LatticeIndex hi = std::max(last, this->last());
  std::vector<Complex> out(static_cast<std::size_t>(hi - lo + 1), Complex{0.0, 0.0});
  std::copy(amplitudes_.begin(), amplitudes_.end(),
            out.begin() + static_cast<std::ptrdiff_t>(first_ - lo));
  return ModeLattice(tau_, eta_star_, lo, std::move(out));
}

ModeLattice ModeLattice::at_time(double tau) const {
  return ModeLattice(tau, eta_star_, first_, amplitudes_);
}

double ModeLattice::sup_norm() const noexcept {
  double m = 0.0;
  for (const Complex& w : amplitudes_) m = std::max(m, std::abs(w));
  return m;
}

double ModeLattice::l1_norm() const noexcept {
  double s = 0.0;
  for (const Complex& w : amplitudes_) s += std::abs(w);
  return s;
}

double ModeLattice::l2_norm() const noexcept {
  double s = 0.0;
  for (const Complex& w : amplitudes_) s += std::norm(w);
  return std::sqrt(s);
}

namespace {

LatticeIndex require_index(double eta_star, double eta, const char* what) {
  auto n = lattice_index(eta_star, eta);
  if (!n) {
    throw std::invalid_argument(std::string("build_lattice: ") + what + " " + std::to_string(eta) +
                                " is not on the lattice eta_star + Z");
  }
  return *n;
}

}  // namespace

ModeLattice build_lattice(double eta_star, double eta_min, double eta_max, const InitSpec& init) {
  const LatticeIndex first = require_index(eta_star, eta_min, "eta_min");
  const LatticeIndex last = require_index(eta_star, eta_max, "eta_max");
  if (first > last) throw std::invalid_argument("build_lattice: eta_min > eta_max");

  std::vector<Complex> amps(static_cast<std::size_t>(last - first + 1), Complex{0.0, 0.0});
  auto slot = [&](double eta, const char* what) -> Complex& {
    const LatticeIndex n = require_index(eta_star, eta, what);
    if (n < first || n > last) {
      throw std::invalid_argument(std::string("build_lattice: ") + what + " " +
                                  std::to_string(eta) + " lies outside the window");
    }
    return amps[static_cast<std::size_t>(n - first)];
  };

  if (const auto* d = std::get_if<DeltaInit>(&init)) {
    slot(d->eta0, "delta mode") = d->value;
  } else if (const auto* m = std::get_if<ModesInit>(&init)) {
    for (const auto& [eta, value] : m->modes) slot(eta, "mode") += value;
  } else {
    const auto& r = std::get<RandomInit>(init);
    const LatticeIndex lo = require_index(eta_star, r.eta_lo, "random support bound");
    const LatticeIndex hi = require_index(eta_star, r.eta_hi, "random support bound");
    if (lo > hi) throw std::invalid_argument("build_lattice: empty random support");
    if (lo < first || hi > last) {
      throw std::invalid_argument("build_lattice: random support lies outside the window");
    }
    std::mt19937_64 rng(r.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (LatticeIndex n = lo; n <= hi; ++n) {
      const double re = uni(rng);
      const double im = uni(rng);
      amps[static_cast<std::size_t>(n - first)] = Complex{re, im};
    }
  }
  return ModeLattice(0.0, eta_star, first, std::move(amps));
}

void rhs_into(const Params& params, double eta_star, LatticeIndex first, double tau,
              std::span<const Complex> omega, std::vector<double>& coeff,
              std::vector<Complex>& out) {
  const std::size_t n = omega.size();
  coeff.resize(n);
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    coeff[i] = coupling(params, eta_star + static_cast<double>(first + static_cast<LatticeIndex>(i)), tau);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Complex d{0.0, 0.0};
    if (i + 1 < n) d -= coeff[i + 1] * omega[i + 1];
    if (i > 0) d += coeff[i - 1] * omega[i - 1];
    out[i] = d;
  }
}

std::vector<Complex> rhs(const ModeLattice& lattice, const Params& params) {
  std::vector<double> coeff;
  std::vector<Complex> out;
  rhs_into(params, lattice.eta_star(), lattice.first(), lattice.tau(), lattice.amplitudes(), coeff,
           out);
  return out;
}

Complex total_sum(const ModeLattice& lattice) noexcept {
  Complex s{0.0, 0.0};
  for (const Complex& w : lattice.amplitudes()) s += w;
  return s;
}

}  // namespace shearlab
