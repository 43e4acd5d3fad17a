#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shearlab/cascade.hpp"

using namespace shearlab;

namespace {

CascadeReport unstable_run(Complex scale = {1.0, 0.0}) {
  const Params p = Params::from_L(0.03, 300.0);
  const ModeLattice w0 = build_lattice(0.0, 0.0, 0.0, DeltaInit{0.0, scale});
  return run_cascade(p, w0, 6, IntegratorConfig{});
}

}  // namespace

TEST_CASE("unstable cascade") {
  const CascadeReport r = unstable_run();
  REQUIRE(r.steps.size() == 7);
  CHECK(r.regime == Regime::Unstable);
  CHECK(r.warnings.empty());
  for (const CascadeStep& s : r.steps) {
    CHECK(s.T == static_cast<double>(s.j) - 0.5);
    CHECK(s.dominant);
    CHECK(s.dominant == (s.resonant_amplitude >= 0.5 * s.sup_amplitude));
    if (s.j < 6) {
      REQUIRE(s.ratio.has_value());
      CHECK(*s.ratio >= 5.0);
    } else {
      CHECK_FALSE(s.ratio.has_value());
    }
  }
  CHECK(r.steps[0].resonant_amplitude == 1.0);
  // First transfer: about the signed single-resonance gain.
  CHECK(*r.steps[0].ratio == doctest::Approx(r.r_exact).epsilon(0.01));
  CHECK(r.steps[6].resonant_amplitude >= std::pow(r.d_grow, 6));

  const GrowthCheck g = verify_growth(r);
  CHECK(g.verdict == GrowthVerdict::Passed);
  CHECK(g.worst_margin >= 1.0);
}

TEST_CASE("growth verification is monotone in d") {
  const CascadeReport r = unstable_run();
  for (double d : {1.5, 2.0, 2.5, r.d_grow}) CHECK(verify_growth(r, d).verdict == GrowthVerdict::Passed);
  CHECK(verify_growth(r, 20.0).verdict == GrowthVerdict::Failed);
  CHECK(verify_growth(r, 0.9).verdict == GrowthVerdict::NotApplicable);
  CHECK(verify_growth(r, 1.0).verdict == GrowthVerdict::NotApplicable);
}

TEST_CASE("cascade is linear in the data") {
  const CascadeReport a = unstable_run();
  const CascadeReport b = unstable_run({0.0, -2.5});
  for (std::size_t j = 0; j < a.steps.size(); ++j) {
    CHECK(b.steps[j].resonant_amplitude == doctest::Approx(2.5 * a.steps[j].resonant_amplitude).epsilon(1e-9));
    CHECK(b.steps[j].dominant == a.steps[j].dominant);
    if (a.steps[j].ratio) CHECK(*b.steps[j].ratio == doctest::Approx(*a.steps[j].ratio).epsilon(1e-9));
  }
}

TEST_CASE("stable parameters: no sustained growth and a warning") {
  const Params p = Params::from_k(0.03, 1.0);
  const ModeLattice w0 = build_lattice(0.0, 0.0, 0.0, DeltaInit{});
  const CascadeReport r = run_cascade(p, w0, 6, IntegratorConfig{});
  CHECK_FALSE(r.warnings.empty());
  for (const CascadeStep& s : r.steps) {
    if (s.j >= 1 && s.ratio) CHECK(*s.ratio < 0.1);
  }
  CHECK(r.sup_growth <= 1.0 + 1e-9);
  CHECK(verify_growth(r).verdict == GrowthVerdict::NotApplicable);
}

TEST_CASE("c = 0 keeps the resonant amplitudes constant") {
  const Params p = Params::from_k(0.0, 1.0 / 300.0);
  const ModeLattice w0 = build_lattice(0.0, 0.0, 0.0, DeltaInit{});
  const CascadeReport r = run_cascade(p, w0, 3, IntegratorConfig{});
  CHECK(r.steps[0].resonant_amplitude == 1.0);
  for (std::size_t j = 1; j < r.steps.size(); ++j) {
    CHECK(r.steps[j].resonant_amplitude == 0.0);
    if (j >= 1) CHECK_FALSE(r.steps[j].ratio.has_value());
  }
}

TEST_CASE("hypothesis violations are warned about") {
  const Params p = Params::from_L(0.03, 300.0);
  const ModeLattice w0 = build_lattice(0.0, -2.0, 2.0, ModesInit{{{0.0, 0.1}, {2.0, 1.0}}});
  const CascadeReport r = run_cascade(p, w0, 1, IntegratorConfig{});
  CHECK(r.warnings.size() == 1);
  CHECK_THROWS_AS(run_cascade(p, w0, 0, IntegratorConfig{}), std::invalid_argument);
  const ModeLattice off = build_lattice(0.5, -1.5, 1.5, DeltaInit{0.5});
  CHECK_THROWS_AS(run_cascade(p, off, 2, IntegratorConfig{}), std::invalid_argument);
}

TEST_CASE("shifted lattice offsets resonate at eta* + j") {
  const Params p = Params::from_L(0.03, 300.0, 0.25);
  const ModeLattice w0 = build_lattice(0.25, 0.25, 0.25, DeltaInit{0.25});
  const CascadeReport r = run_cascade(p, w0, 3, IntegratorConfig{});
  CHECK(r.steps[1].T == doctest::Approx(0.75));
  for (const CascadeStep& s : r.steps) CHECK(s.dominant);
  CHECK(*r.steps[1].ratio >= 5.0);
}

TEST_CASE("chain growth factors") {
  const ChainComparison a = chain_growth_factors(0.1, 1000.0, 10, 1.0, 1.0);
  CHECK(a.k_chain_factor == doctest::Approx(7.594e6).epsilon(1e-3));
  CHECK(a.k_chain_optimum == doctest::Approx(std::exp(10.0)));
  CHECK(a.k_chain_optimum == doctest::Approx(2.2026e4).epsilon(1e-4));
  const ChainComparison b = chain_growth_factors(0.03, 1.0, 1, 1.0 / 300.0, 2.0);
  CHECK(b.eta_chain_factor == doctest::Approx(std::pow(18.0 * std::numbers::pi, 2)).epsilon(1e-12));
  CHECK(b.eta_chain_factor == doctest::Approx(3197.5).epsilon(1e-3));
  CHECK(b.k_chain_factor == 0.03);
  const ChainComparison big = chain_growth_factors(0.5, 1e6, 400, 0.01, 100.0);
  CHECK(std::isfinite(big.log_k_chain_factor));
  CHECK_THROWS(chain_growth_factors(0.1, 10.0, 0, 1.0, 1.0));
}
