#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shearlab/lattice.hpp"
#include "shearlab/params.hpp"

namespace shearlab {

/// A nearest-neighbour walk γ = (γ_0, …, γ_j) on η* + Z, j ≥ 1.
class Path {
 public:
  /// Throws std::invalid_argument unless consecutive indices differ by exactly 1.
  Path(double eta_star, std::vector<LatticeIndex> indices);

  std::size_t length() const noexcept { return indices_.size() - 1; }
  double eta_star() const noexcept { return eta_star_; }
  std::span<const LatticeIndex> indices() const noexcept { return indices_; }
  LatticeIndex index(std::size_t i) const { return indices_.at(i); }
  double node(std::size_t i) const { return eta_star_ + static_cast<double>(indices_.at(i)); }
  /// +1 for an upward step γ_{i+1} = γ_i + 1, −1 for a downward one.
  int sign(std::size_t i) const { return indices_.at(i + 1) > indices_.at(i) ? 1 : -1; }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  double eta_star_;
  std::vector<LatticeIndex> indices_;
};

struct PathLimits {
  std::size_t max_paths = 1'000'000;
  /// Restricts walks to [lo, hi] (inclusive lattice indices) when set.
  std::optional<std::pair<LatticeIndex, LatticeIndex>> window;
};

/// Number of walks of length exactly `length` from `from` to `to` (respecting the window).
long double count_paths(LatticeIndex from, LatticeIndex to, std::size_t length,
                        const PathLimits& limits = {});

/// All paths from `from` to `to` with 1 ≤ |γ| ≤ max_len, ordered by length and then
/// lexicographically. Throws ResourceError if more than limits.max_paths would result.
std::vector<Path> enumerate_paths(double eta_star, LatticeIndex from, LatticeIndex to,
                                  std::size_t max_len, const PathLimits& limits = {});

/// All 2^length paths of exactly `length` steps starting at `from`.
std::vector<Path> enumerate_paths_from(double eta_star, LatticeIndex from, std::size_t length,
                                       const PathLimits& limits = {});

/// Shortest non-trivial path length: |n1 − n0|, or 2 when n0 == n1.
std::size_t path_distance(LatticeIndex from, LatticeIndex to) noexcept;

enum class PathConvention {
  /// Unsigned factor c/(k² + (γ_i − τ)²).
  Unsigned,
  /// Signed factor σ_i·(c/2)/(k² + (γ_i − τ)²), as in the dynamics.
  ExactHalfSigned,
};

struct PathIntegralOptions {
  double abs_tol = 1e-12;
  /// Tolerance relative to the product of single-step bounds.
  double rel_tol = 1e-13;
  std::size_t chebyshev_degree = 16;
  std::size_t max_panels = 20000;
};

struct PathIntegralResult {
  double value = 0.0;
  PathConvention convention = PathConvention::Unsigned;
  double quadrature_error = 0.0;
  /// Π_i ∫_{t0}^{t1} |factor_i|, an upper bound for |value|.
  double bound_product = 0.0;
  std::size_t panels = 0;
};

/// Ordered-time iterated integral of the step factors along γ over
/// t0 ≤ τ_0 ≤ … ≤ τ_{j−1} ≤ t1, computed as nested running integrals.
PathIntegralResult path_integral(const Path& path, const Params& params, double t0, double t1,
                                 PathConvention convention, const PathIntegralOptions& options = {});

/// ∫_{t0}^{t1} of one step factor at node eta, in closed form.
double single_step_integral(const Params& params, double eta, double t0, double t1,
                            PathConvention convention) noexcept;

/// ω0 plus the signed path integrals of all walks with length ≤ J that stay
/// inside ω0's window, i.e. the J-th Picard iterate of the truncated system at t1.
ModeLattice partial_sum(const ModeLattice& omega0, const Params& params, double t0, double t1,
                        std::size_t J, const PathLimits& limits = {},
                        const PathIntegralOptions& options = {});

/// Growth rate c·L² bounding the ℓ² operator norm of the right-hand side.
double series_rate(const Params& params) noexcept;

/// (x)^j / j! with x = c·L²·t.
double series_term(const Params& params, double t, std::size_t j);

/// Σ_{j>J} (c·L²·t)^j / j!.
double series_tail_bound(const Params& params, double t, std::size_t J);

/// (x)^{J+1}/(J+1)!·e^x, a closed-form majorant of the tail.
double series_tail_closed_form(const Params& params, double t, std::size_t J);

struct NonresonantBound {
  /// 4c.
  double delta;
  /// c/(k² + 1/4): the integrand bound times the unit interval length.
  double sharp;
};

NonresonantBound nonresonant_bound(const Params& params) noexcept;

/// (2c/k)·arctan(1/(2k)).
double resonance_gain(const Params& params) noexcept;

struct SmallnessCondition {
  std::string name;
  double value;
  double threshold;
  bool satisfied;
};

struct SmallnessReport {
  /// rδ < 1/4, δ < 1/4, r > 10 (in that order); `passed` requires all three.
  std::vector<SmallnessCondition> conditions;
  /// The intermediate chain rδ ≤ 8πc²L and 8πc²L < 1/4, reported separately.
  std::vector<SmallnessCondition> chain;
  bool passed = false;
};

SmallnessReport smallness_check(const Params& params);

/// (1−2δ)^{−3}(1−2rδ)^{−1}·r·(2δ)^{|η0−j| + min(|η−j+1|, |η−j−1|)} on lattice indices.
/// Throws DomainError unless 2δ < 1 and 2rδ < 1.
double resonant_path_bound(double delta, double r, LatticeIndex eta0, LatticeIndex eta,
                           LatticeIndex j);
double resonant_path_bound(const Params& params, LatticeIndex eta0, LatticeIndex eta,
                           LatticeIndex j);

struct Trajectory;

struct EnvelopeReport {
  double d = 0.0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  /// Largest |ω(τ,η) − ω0(η)| / envelope(η) over all samples and modes.
  double worst_ratio = 0.0;
  double worst_tau = 0.0;
  double worst_eta = 0.0;
  bool passed() const noexcept { return violations == 0; }
};

/// Checks |ω(τ,η) − ω0(η)| ≤ (1−2d)^{−1}·Σ_{η0} (2d)^{dist(η,η0)}·|ω0(η0)| with
/// d = cπ/k at every sample. Throws DomainError unless 2d < 1.
EnvelopeReport stability_envelope_check(const Trajectory& trajectory, const Params& params);

}  // namespace shearlab
