#include "shearlab/regime.hpp"

#include <cmath>
#include <numbers>

namespace shearlab {

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::LyapunovStable:
      return "LYAPUNOV_STABLE";
    case Regime::PathsumStable:
      return "PATHSUM_STABLE";
    case Regime::Unstable:
      return "UNSTABLE";
    case Regime::Indeterminate:
      return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

RegimeClassification classify_regime(const Params& params) {
  constexpr double pi = std::numbers::pi;
  const double c = params.c();
  const double L = params.L();

  const double pi_c_L = pi * c * L;
  const double pi_c2_L = pi * c * c * L;
  const double two_pi_c_L = 2.0 * pi * c * L;
  const double lyap = 4.0 - 2.0 * std::exp(2.0 * c * L);

  RegimeClassification out{};
  out.conditions = {
      {"pi*c*L > 20", pi_c_L, 20.0, pi_c_L > 20.0},
      {"pi*c^2*L < 1", pi_c2_L, 1.0, pi_c2_L < 1.0},
      {"2*pi*c*L < 1", two_pi_c_L, 1.0, two_pi_c_L < 1.0},
      {"4 - 2*exp(2*c*L) > 0", lyap, 0.0, lyap > 0.0},
  };
  out.unstable = out.conditions[0].satisfied && out.conditions[1].satisfied;
  out.pathsum_stable = out.conditions[2].satisfied;
  out.lyapunov_stable = out.conditions[3].satisfied;

  if (out.unstable) {
    out.label = Regime::Unstable;
  } else if (out.pathsum_stable) {
    out.label = Regime::PathsumStable;
  } else if (out.lyapunov_stable) {
    out.label = Regime::LyapunovStable;
  } else {
    out.label = Regime::Indeterminate;
  }
  return out;
}

}  // namespace shearlab
