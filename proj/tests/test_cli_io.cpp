#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "shearlab/commands.hpp"
#include "shearlab/config.hpp"
#include "shearlab/csv.hpp"
#include "shearlab/errors.hpp"
#include "shearlab/sweep.hpp"

using namespace shearlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  fs::path p = fs::temp_directory_path() / ("shearlab_test_" + tag + "_" + std::to_string(rng()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("minimal cascade config gets every default") {
  const RunConfig cfg = parse_config(R"({"command": "cascade", "params": {"c": 0.03, "L": 300}, "cascade": {"J": 6}})");
  CHECK(cfg.command == Command::Cascade);
  REQUIRE(cfg.params.has_value());
  CHECK(cfg.params->k() == doctest::Approx(1.0 / 300.0));
  CHECK(cfg.cascade.J == 6);
  CHECK(cfg.integrator.rel_tol == 1e-10);
  CHECK(cfg.integrator.window.initial_radius == 16);
  CHECK(cfg.integrator.window.growth_margin == 32);
  const std::string echo = cfg.echo();
  CHECK(echo.find("\"resonance_cap_factor\"") != std::string::npos);
  CHECK(echo.find("\"edge_tol\"") != std::string::npos);
  // The echo is itself a valid config describing the same run.
  CHECK(parse_config(echo).echo() == echo);
}

TEST_CASE("k and L consistency") {
  CHECK_NOTHROW(parse_config(R"({"command": "classify", "params": {"c": 0.03, "k": "1/300", "L": 300}})"));
  const std::string err = config_error(R"({"command": "classify", "params": {"c": 0.03, "k": 1, "L": 300}})");
  CHECK(err.find("kL≠1") != std::string::npos);
  CHECK(err.find("params.k") != std::string::npos);
  CHECK(config_error(R"({"command": "classify", "params": {"c": 0.03}})").find("params.k") != std::string::npos);
}

TEST_CASE("configuration diagnostics name the field") {
  CHECK(config_error(R"({"command": "classify", "params": {"c": 0.03, "k": 1}, "colour": 3})").find("colour: unknown key") != std::string::npos);
  CHECK(config_error(R"({"command": "classify", "params": {"c": 0.03, "k": 1, "kk": 3}})").find("params.kk") != std::string::npos);
  CHECK(config_error(R"({"command": "classify", "params": {"k": 1}})").find("params.c: missing") != std::string::npos);
  CHECK(config_error(R"({"params": {"c": 0.03, "k": 1}})").find("command") != std::string::npos);
  CHECK(config_error(R"({"command": "fly", "params": {"c": 0.03, "k": 1}})").find("unknown command") != std::string::npos);
  CHECK(config_error(R"({"command": "simulate", "params": {"c": 0.03, "k": 1}, "init": {"kind": "random"}})").find("seed") != std::string::npos);
  CHECK(config_error(R"({"command": "simulate", "params": {"c": 0.03, "k": 1}, "integrator": {"rel_tol": -1}})").find("integrator") != std::string::npos);
  CHECK(config_error(R"({"command": "classify", "params": {"c": "1/0", "k": 1}})").find("zero denominator") != std::string::npos);
  const std::string syntax = config_error("{\n  \"command\": \"classify\",\n  \"params\": {\"c\": 0.03,,}\n}");
  CHECK(syntax.find("line 3") != std::string::npos);
}

TEST_CASE("overrides from the command line") {
  ConfigOverrides o;
  o.command = Command::Lyapunov;
  o.seed = 99;
  o.workers = 3;
  const RunConfig cfg = parse_config(
      R"({"command": "simulate", "params": {"c": 0.03, "k": 1}, "init": {"kind": "random"}, "seed": 1})", o);
  CHECK(cfg.command == Command::Lyapunov);
  CHECK(cfg.seed == 99u);
  CHECK(std::get<RandomInit>(cfg.init).seed == 99u);
  CHECK(cfg.workers == 3u);
  CHECK(cfg.lyapunov.C1 == 4.0);
  CHECK(cfg.lyapunov.C2 == 1.0);
}

TEST_CASE("csv formatting") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 28.154335660038505}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(std::optional<double>{}).empty());
  CsvTable t({"a", "b"});
  CHECK(t.str() == "a,b\n");
  t.add_row({"1", "x,y"});
  CHECK(t.str() == "a,b\n1,\"x,y\"\n");
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);

  const fs::path dir = scratch_dir("csv");
  fs::create_directories(dir);
  write_csv(CsvTable({"tau", "eta"}), dir / "empty.csv");
  CHECK(slurp(dir / "empty.csv") == "tau,eta\n");
  CHECK_FALSE(fs::exists(dir / "empty.csv.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("classify run") {
  const RunOutcome out = execute(parse_config(R"({"command": "classify", "params": {"c": 0.03, "L": 300}})"));
  CHECK(out.exit_code == 0);
  CHECK(out.report.find("label: UNSTABLE") != std::string::npos);
  REQUIRE(out.files.size() == 1);
  CHECK(out.files[0].first == "classify.csv");
  CHECK(out.files[0].second.rfind("condition,value,threshold,satisfied\n", 0) == 0);
  CHECK(count_lines(out.files[0].second) == 5);
}

TEST_CASE("cascade run writes its table") {
  const fs::path dir = scratch_dir("cascade");
  const int code = run(R"({"command": "cascade", "params": {"c": 0.03, "L": 300}, "cascade": {"J": 6}})", {}, dir);
  CHECK(code == 0);
  const std::string csv = slurp(dir / "cascade.csv");
  CHECK(csv.rfind("j,T_j,res_amp,sup_amp,dominance,ratio,d_pow_j\n", 0) == 0);
  CHECK(count_lines(csv) == 8);
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  std::size_t with_ratio = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() == 7 && !cells[5].empty()) {
      ++with_ratio;
      CHECK(std::stod(cells[5]) >= 5.0);
    }
    CHECK(cells[4] == "true");
  }
  CHECK(with_ratio == 6);
  CHECK(slurp(dir / "report.txt").find("exit: 0") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  SUBCASE("malformed config: exit 2 and only the report") {
    const fs::path dir = scratch_dir("bad");
    CHECK(run("{\"command\": \"cascade\", ", {}, dir) == 2);
    CHECK(fs::exists(dir / "report.txt"));
    CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
    fs::remove_all(dir);
  }
  SUBCASE("runtime error: exit 2") {
    const RunOutcome out = execute(parse_config(R"({"command": "lyapunov", "params": {"c": 0.03, "L": 300}})"));
    CHECK(out.exit_code == 2);
    CHECK(out.files.empty());
    CHECK(out.report.find("4 - 2*exp(2*c*L)") != std::string::npos);
  }
  SUBCASE("property failure: exit 1 with artifacts") {
    const RunOutcome out = execute(parse_config(
        R"({"command": "cascade", "params": {"c": 0.03, "L": 300}, "cascade": {"J": 3, "min_ratio": 100}})"));
    CHECK(out.exit_code == 1);
    CHECK(out.files.size() == 1);
    CHECK(out.report.find("FAIL ratio") != std::string::npos);
  }
}

TEST_CASE("runs are byte-identical") {
  const std::string text =
      R"({"command": "simulate", "params": {"c": 0.03, "k": 1}, "init": {"kind": "random", "eta_lo": -4, "eta_hi": 4}, "seed": 5, "simulate": {"tau_end": 5}})";
  const fs::path a = scratch_dir("det_a");
  const fs::path b = scratch_dir("det_b");
  CHECK(run(text, {}, a) == 0);
  CHECK(run(text, {}, b) == 0);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
  CHECK(slurp(a / "trajectory.csv").rfind("tau,eta,re_omega,im_omega,abs_omega\n", 0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sweep: grid order, parallel equals serial, single point equals its run") {
  SweepGrid grid;
  grid.c = {0.01, 0.03};
  grid.L = {1.0, 300.0};
  const auto serial = run_sweep(grid, IntegratorConfig{}, 1);
  const auto parallel = run_sweep(grid, IntegratorConfig{}, 4);
  CHECK(sweep_table(serial).str() == sweep_table(parallel).str());
  REQUIRE(serial.size() == 4);
  CHECK(serial[0].label == "PATHSUM_STABLE");
  CHECK(serial[1].label == "INDETERMINATE");
  CHECK(serial[2].label == "PATHSUM_STABLE");
  CHECK(serial[3].label == "UNSTABLE");
  CHECK(serial[3].verdict == "passed");
  CHECK(serial[0].verdict == "passed");
  CHECK(serial[1].verdict == "not_applicable");

  SweepGrid one;
  one.c = {0.03};
  one.L = {300.0};
  const auto single = run_sweep(one, IntegratorConfig{}, 2);
  CHECK(sweep_table(single).rows()[0] == sweep_table(serial).rows()[3]);

  SweepGrid broken;
  broken.c = {0.03, 0.7};
  broken.L = {1.0};
  const auto rows = run_sweep(broken, IntegratorConfig{}, 2);
  CHECK(rows[0].status == "ok");
  CHECK(rows[1].status.rfind("error:", 0) == 0);
}
