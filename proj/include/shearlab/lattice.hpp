#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "shearlab/params.hpp"

namespace shearlab {

using Complex = std::complex<double>;

/// Integer position n of the frequency η = η* + n on the lattice η* + Z.
using LatticeIndex = std::int64_t;

/// Returns n with eta == eta_star + n, or nullopt when eta is off the lattice.
std::optional<LatticeIndex> lattice_index(double eta_star, double eta);

/// Complex mode amplitudes ω(τ, η) on the contiguous window
/// [η* + first, η* + last] at a fixed rescaled time τ.
///
/// Modes outside the window are zero. Values are immutable; operations that
/// change the state return a new lattice.
class ModeLattice {
 public:
  ModeLattice(double tau, double eta_star, LatticeIndex first, std::vector<Complex> amplitudes);

  double tau() const noexcept { return tau_; }
  double eta_star() const noexcept { return eta_star_; }
  LatticeIndex first() const noexcept { return first_; }
  LatticeIndex last() const noexcept {
    return first_ + static_cast<LatticeIndex>(amplitudes_.size()) - 1;
  }
  double eta_min() const noexcept { return eta_star_ + static_cast<double>(first_); }
  double eta_max() const noexcept { return eta_star_ + static_cast<double>(last()); }
  std::size_t size() const noexcept { return amplitudes_.size(); }

  /// Frequency of the i-th stored amplitude.
  double eta_at(std::size_t i) const noexcept {
    return eta_star_ + static_cast<double>(first_ + static_cast<LatticeIndex>(i));
  }
  bool contains(LatticeIndex n) const noexcept { return n >= first_ && n <= last(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  /// Amplitude at lattice index n, zero outside the window.
  Complex at(LatticeIndex n) const noexcept;

  /// Same window and offset, new time and amplitudes.
  ModeLattice evolved(double tau, std::vector<Complex> amplitudes) const;
  /// Zero-padded (never shrunk) copy covering [first, last].
  ModeLattice extended(LatticeIndex first, LatticeIndex last) const;
  /// Same amplitudes re-stamped at another time.
  ModeLattice at_time(double tau) const;

  double sup_norm() const noexcept;
  double l1_norm() const noexcept;
  double l2_norm() const noexcept;

  friend bool operator==(const ModeLattice&, const ModeLattice&) = default;

 private:
  double tau_;
  double eta_star_;
  LatticeIndex first_;
  std::vector<Complex> amplitudes_;
};

/// Initial data ω0 = δ_{η0}.
struct DeltaInit {
  double eta0 = 0.0;
  Complex value{1.0, 0.0};
};

/// Finitely supported data given as (η, ω0(η)) pairs.
struct ModesInit {
  std::vector<std::pair<double, Complex>> modes;
};

/// Uniform random real and imaginary parts in [-1, 1] on [eta_lo, eta_hi].
struct RandomInit {
  std::uint64_t seed = 0;
  double eta_lo = -10.0;
  double eta_hi = 10.0;
};

using InitSpec = std::variant<DeltaInit, ModesInit, RandomInit>;

/// Lattice at τ = 0 on the window [eta_min, eta_max] with the requested data.
/// Throws std::invalid_argument for off-lattice bounds or data outside the window.
ModeLattice build_lattice(double eta_star, double eta_min, double eta_max, const InitSpec& init);

/// dω(η)/dτ = −coupling(η+1,τ)·ω(η+1) + coupling(η−1,τ)·ω(η−1) on the window.
std::vector<Complex> rhs(const ModeLattice& lattice, const Params& params);

/// Same as rhs, writing into `out` (resized to the window) for a state given at time tau.
void rhs_into(const Params& params, double eta_star, LatticeIndex first, double tau,
              std::span<const Complex> omega, std::vector<double>& coeff_scratch,
              std::vector<Complex>& out);

/// Sum of the window amplitudes in ascending η.
Complex total_sum(const ModeLattice& lattice) noexcept;

}  // namespace shearlab
