#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shearlab/params.hpp"

namespace shearlab {

enum class Regime { LyapunovStable, PathsumStable, Unstable, Indeterminate };

std::string_view to_string(Regime regime) noexcept;

struct RegimeCondition {
  std::string name;
  double value;
  double threshold;
  bool satisfied;
};

/// Outcome of the threshold arithmetic on (c, L).
///
/// The regions overlap: every path-sum stable point also satisfies the
/// Lyapunov condition. `label` picks one with precedence
/// Unstable > PathsumStable > LyapunovStable > Indeterminate, while the
/// boolean flags report each condition independently.
struct RegimeClassification {
  Regime label;
  bool unstable;
  bool pathsum_stable;
  bool lyapunov_stable;
  std::vector<RegimeCondition> conditions;
};

/// Evaluates πcL > 20, πc²L < 1, 2πcL < 1 and 4 − 2·exp(2cL) > 0.
RegimeClassification classify_regime(const Params& params);

}  // namespace shearlab
