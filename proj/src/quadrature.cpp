#include "shearlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "shearlab/errors.hpp"

namespace shearlab {

namespace {

// Kronrod abscissae on [0,1]; odd indices are the 7-point Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options,
                                std::span<const double> breakpoints) {
  if (!(b > a)) throw std::invalid_argument("integrate_gk15: requires a < b");
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Pieces are kept in ascending position so the sums are order-stable.
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) pieces.push_back(gk15(f, cuts[i], cuts[i + 1]));

  double value = 0.0, error = 0.0;
  for (;;) {
    value = 0.0;
    error = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      value += pieces[i].value;
      error += pieces[i].error;
      if (pieces[i].error > pieces[worst].error) worst = i;
    }
    if (!std::isfinite(value)) throw QuadratureError("integrate_gk15: non-finite integrand");
    if (error <= std::max(options.abs_tol, options.rel_tol * std::abs(value))) break;

    const Piece w = pieces[worst];
    const double mid = 0.5 * (w.a + w.b);
    const bool too_narrow = !(mid > w.a && mid < w.b);
    if (pieces.size() >= options.max_intervals || too_narrow) {
      // Rounding floor: nothing left that refinement can improve.
      if (error <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(value)) break;
      std::ostringstream os;
      os.precision(17);
      os << "integrate_gk15: no convergence after " << pieces.size() << " subintervals; worst ["
         << w.a << ", " << w.b << "] error " << w.error;
      throw QuadratureError(os.str());
    }
    pieces[worst] = gk15(f, w.a, mid);
    pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(worst) + 1, gk15(f, mid, w.b));
  }
  return {value, error, pieces.size()};
}

ChebyshevRule::ChebyshevRule(std::size_t degree) : degree_(degree) {
  if (degree < 2) throw std::invalid_argument("ChebyshevRule: degree must be >= 2");
  const std::size_t n = degree_;
  const std::size_t m = n + 1;
  const long double pi = std::numbers::pi_v<long double>;
  nodes_.resize(m);
  std::vector<long double> theta(m);
  for (std::size_t p = 0; p < m; ++p) {
    theta[p] = static_cast<long double>(n - p) * pi / static_cast<long double>(n);
    nodes_[p] = static_cast<double>(std::cos(theta[p]));
  }
  nodes_.front() = -1.0;
  nodes_.back() = 1.0;

  // Values -> coefficients (discrete cosine transform of type I).
  std::vector<long double> vc(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t p = 0; p < m; ++p) {
      long double w = (p == 0 || p == n) ? 0.5L : 1.0L;
      long double v = 2.0L / static_cast<long double>(n) * w *
                      std::cos(static_cast<long double>(k) * theta[p]);
      if (k == 0 || k == n) v *= 0.5L;
      vc[k * m + p] = v;
    }
  }
  to_coeffs_.assign(vc.begin(), vc.end());

  // Coefficients of the antiderivative, evaluated at the nodes minus the value at −1.
  integration_.assign(m * m, 0.0);
  std::vector<long double> a(m), b(m + 1);
  for (std::size_t col = 0; col < m; ++col) {
    for (std::size_t k = 0; k < m; ++k) a[k] = vc[k * m + col];
    std::fill(b.begin(), b.end(), 0.0L);
    for (std::size_t k = 0; k < m; ++k) {
      if (k == 0) {
        b[1] += a[0];
      } else if (k == 1) {
        b[2] += a[1] / 4.0L;
      } else {
        b[k + 1] += a[k] / (2.0L * static_cast<long double>(k + 1));
        b[k - 1] -= a[k] / (2.0L * static_cast<long double>(k - 1));
      }
    }
    long double at_minus_one = 0.0L;
    for (std::size_t k = 0; k <= m; ++k) at_minus_one += (k % 2 == 0 ? 1.0L : -1.0L) * b[k];
    for (std::size_t p = 0; p < m; ++p) {
      long double s = 0.0L;
      for (std::size_t k = 0; k <= m; ++k) s += b[k] * std::cos(static_cast<long double>(k) * theta[p]);
      integration_[p * m + col] = static_cast<double>(s - at_minus_one);
    }
  }
}

void ChebyshevRule::running_integral(std::span<const double> values, std::span<double> out) const {
  const std::size_t m = size();
  for (std::size_t p = 0; p < m; ++p) {
    double s = 0.0;
    for (std::size_t q = 0; q < m; ++q) s += integration_[p * m + q] * values[q];
    out[p] = s;
  }
}

void ChebyshevRule::coefficients(std::span<const double> values, std::span<double> out) const {
  const std::size_t m = size();
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t q = 0; q < m; ++q) s += to_coeffs_[k * m + q] * values[q];
    out[k] = s;
  }
}

}  // namespace shearlab
