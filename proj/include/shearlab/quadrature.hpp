#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace shearlab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-14;
  std::size_t max_intervals = 100000;
};

/// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature on [a, b].
/// Splits the subinterval with the largest error estimate until the summed
/// estimate is below max(abs_tol, rel_tol·|value|). Extra breakpoints (inside
/// (a, b)) seed the partition. Throws QuadratureError naming the worst
/// subinterval when max_intervals is reached.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options = {},
                                std::span<const double> breakpoints = {});

/// Chebyshev–Lobatto collocation on [-1, 1] with N+1 nodes.
///
/// Provides the spectral running-integral matrix S with
/// (S·v)_p = ∫_{-1}^{x_p} P(v)(s) ds, where P(v) is the interpolant of the
/// node values v, and the Chebyshev coefficients of P(v).
class ChebyshevRule {
 public:
  explicit ChebyshevRule(std::size_t degree);

  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return degree_ + 1; }
  /// Ascending nodes x_p = −cos(pπ/N).
  std::span<const double> nodes() const noexcept { return nodes_; }

  /// out_p = ∫_{-1}^{x_p} P(v) ds.
  void running_integral(std::span<const double> values, std::span<double> out) const;
  /// Chebyshev coefficients of the interpolant.
  void coefficients(std::span<const double> values, std::span<double> out) const;

 private:
  std::size_t degree_;
  std::vector<double> nodes_;
  std::vector<double> integration_;   // row-major (N+1)×(N+1)
  std::vector<double> to_coeffs_;     // row-major (N+1)×(N+1)
};

}  // namespace shearlab
