#pragma once

#include <string>

namespace shearlab {

/// Physical and spectral parameters of the lattice problem.
///
/// The torus length and the minimal x-frequency are tied by k = 1/L.
/// Construct through from_k or from_L; the derived constants are computed
/// once and can be re-checked with validate().
class Params {
 public:
  static Params from_k(double c, double k, double eta_star = 0.0);
  static Params from_L(double c, double L, double eta_star = 0.0);

  double c() const noexcept { return c_; }
  double k() const noexcept { return k_; }
  double L() const noexcept { return L_; }
  double eta_star() const noexcept { return eta_star_; }

  /// Bound 4c on a single non-resonant step integral.
  double delta() const noexcept { return delta_; }
  /// Unsigned single-resonance gain (2c/k)·arctan(1/(2k)).
  double r_unsigned() const noexcept { return r_unsigned_; }
  /// Gain of the true signed c/2 stencil, r_unsigned/2.
  double r_exact() const noexcept { return r_exact_; }
  /// Full-line integral of c/(k²+τ²), i.e. cπ/k.
  double d_stab() const noexcept { return d_stab_; }
  /// Per-step growth constant (π/10)·c·L.
  double d_grow() const noexcept { return d_grow_; }

  /// Throws std::invalid_argument if any invariant fails, including a
  /// bit-for-bit mismatch of the stored derived constants.
  void validate() const;

  std::string describe() const;

  friend bool operator==(const Params&, const Params&) = default;

 private:
  Params(double c, double k, double L, double eta_star);

  double c_;
  double k_;
  double L_;
  double eta_star_;
  double delta_;
  double r_unsigned_;
  double r_exact_;
  double d_stab_;
  double d_grow_;
};

/// (c/2)/(k² + (η−τ)²), the coefficient of the rescaled-time ODE.
double coupling(const Params& params, double eta, double tau) noexcept;

}  // namespace shearlab
