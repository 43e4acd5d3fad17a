#include "shearlab/params.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace shearlab {

namespace {

struct Derived {
  double delta, r_unsigned, r_exact, d_stab, d_grow;
};

Derived derive(double c, double k, double L) {
  const double r_unsigned = (2.0 * c / k) * std::atan(1.0 / (2.0 * k));
  return {4.0 * c, r_unsigned, r_unsigned / 2.0, c * std::numbers::pi / k,
          (std::numbers::pi / 10.0) * c * L};
}

void check_ranges(double c, double k, double L, double eta_star) {
  // c = 0 is admitted as the decoupled limit used by the trivial checks.
  if (!(c >= 0.0 && c < 0.5)) {
    throw std::invalid_argument("Params: c must satisfy 0 <= c < 1/2");
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("Params: k must be positive and finite");
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("Params: L must be positive and finite");
  }
  if (!(eta_star >= 0.0 && eta_star < 1.0)) {
    throw std::invalid_argument("Params: eta_star must lie in [0,1)");
  }
  if (std::abs(k * L - 1.0) > 8.0 * std::numeric_limits<double>::epsilon()) {
    throw std::invalid_argument("Params: k*L must equal 1");
  }
}

}  // namespace

Params::Params(double c, double k, double L, double eta_star)
    : c_(c), k_(k), L_(L), eta_star_(eta_star) {
  check_ranges(c, k, L, eta_star);
  const Derived d = derive(c, k, L);
  delta_ = d.delta;
  r_unsigned_ = d.r_unsigned;
  r_exact_ = d.r_exact;
  d_stab_ = d.d_stab;
  d_grow_ = d.d_grow;
}

Params Params::from_k(double c, double k, double eta_star) {
  if (!(k > 0.0)) throw std::invalid_argument("Params: k must be positive");
  return Params(c, k, 1.0 / k, eta_star);
}

Params Params::from_L(double c, double L, double eta_star) {
  if (!(L > 0.0)) throw std::invalid_argument("Params: L must be positive");
  return Params(c, 1.0 / L, L, eta_star);
}

void Params::validate() const {
  check_ranges(c_, k_, L_, eta_star_);
  const Derived d = derive(c_, k_, L_);
  if (d.delta != delta_ || d.r_unsigned != r_unsigned_ || d.r_exact != r_exact_ ||
      d.d_stab != d_stab_ || d.d_grow != d_grow_) {
    throw std::invalid_argument("Params: stored derived constants do not match recomputation");
  }
}

std::string Params::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "c=" << c_ << " k=" << k_ << " L=" << L_ << " eta_star=" << eta_star_
     << " delta=" << delta_ << " r_unsigned=" << r_unsigned_ << " r_exact=" << r_exact_
     << " d_stab=" << d_stab_ << " d_grow=" << d_grow_;
  return os.str();
}

double coupling(const Params& params, double eta, double tau) noexcept {
  const double x = eta - tau;
  const double k = params.k();
  return 0.5 * params.c() / (k * k + x * x);
}

}  // namespace shearlab
