#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shearlab/integrator.hpp"
#include "shearlab/lattice.hpp"
#include "shearlab/params.hpp"

namespace shearlab {

enum class Command { Simulate, Lyapunov, Pathsum, Cascade, Classify, Sweep };

std::string_view to_string(Command command) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

struct SimulateOptions {
  double tau_end = 50.0;
  double sample_every = 0.5;
};

struct LyapunovOptions {
  double tau_end = 50.0;
  double sample_every = 0.25;
  /// Defaults to 4/k and 1/k.
  std::optional<double> C1;
  std::optional<double> C2;
  int order = 2;
  double tol_rel = 1e-10;
};

struct PathsumOptions {
  double t0 = 0.0;
  double t1 = 2.0;
  std::size_t J = 4;
};

struct CascadeOptions {
  std::size_t J = 6;
  /// Smallest accepted ratio ρ_j in the UNSTABLE regime.
  double min_ratio = 5.0;
};

struct SweepOptions {
  std::vector<double> c;
  std::vector<double> L;
  std::size_t J = 6;
  /// Largest accepted sup-norm growth in stable cells.
  double stable_envelope = 2.0;
};

/// Values supplied on the command line; they take precedence over the file.
struct ConfigOverrides {
  std::optional<Command> command;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

/// A validated run description with every default filled in.
struct RunConfig {
  Command command = Command::Classify;
  /// Absent only for sweeps, which build their own parameters per grid point.
  std::optional<Params> params;
  IntegratorConfig integrator;
  std::optional<double> eta_min;
  std::optional<double> eta_max;
  InitSpec init = DeltaInit{};
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;

  SimulateOptions simulate;
  LyapunovOptions lyapunov;
  PathsumOptions pathsum;
  CascadeOptions cascade;
  SweepOptions sweep;

  /// The full configuration, defaults included, as canonical JSON.
  std::string echo() const;
};

/// Parses the JSON configuration format. Throws ConfigError with the JSON
/// line/column for syntax errors and the dotted field path for unknown,
/// missing or inconsistent keys (including k·L ≠ 1).
RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

}  // namespace shearlab
