// Command-line front end: one subcommand per run type.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "shearlab/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out = "shearlab_out";
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice simulations of shear-flow mode coupling"};
  app.require_subcommand(1);
  Flags flags;

  const char* names[] = {"simulate", "lyapunov", "pathsum", "cascade", "classify", "sweep"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " command");
    sub->add_option("--config", flags.config, "JSON configuration file")->required();
    sub->add_option("--out", flags.out, "output directory")->capture_default_str();
    sub->add_option("--workers", flags.workers, "worker threads for sweeps");
    sub->add_option("--seed", flags.seed, "seed for random initial data");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : shearlab::kExitError;
  }

  shearlab::ConfigOverrides overrides;
  overrides.command = shearlab::parse_command(app.get_subcommands().front()->get_name());
  overrides.workers = flags.workers;
  overrides.seed = flags.seed;

  std::ifstream in(flags.config, std::ios::binary);
  std::string text;
  if (in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  int code = shearlab::kExitError;
  if (!in) {
    shearlab::RunOutcome outcome{shearlab::kExitError,
                                 "error: cannot read config " + flags.config + "\nexit: 2\n", {}};
    code = shearlab::write_outcome(outcome, flags.out);
  } else {
    code = shearlab::run(text, overrides, flags.out);
  }

  std::ifstream report(std::filesystem::path(flags.out) / "report.txt");
  if (report) std::cout << report.rdbuf();
  return code;
}
