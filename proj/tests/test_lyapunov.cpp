#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "shearlab/integrator.hpp"
#include "shearlab/lyapunov.hpp"

using namespace shearlab;

namespace {

const Params kStable = Params::from_k(0.03, 1.0);

}  // namespace

TEST_CASE("weight values and range") {
  const WeightSpec spec = WeightSpec::standard(kStable);
  CHECK(spec.C1 == 4.0);
  CHECK(spec.C2 == 1.0);
  CHECK(weight(spec, kStable, 3.7, 3.7) == 1.0);
  CHECK(weight(spec, kStable, 0.0, 1e12) == doctest::Approx(std::exp(0.12 * std::numbers::pi / 2)));
  CHECK(weight(spec, kStable, 0.0, 1e12) == doctest::Approx(1.2073).epsilon(1e-4));

  const double lo = std::exp(-0.12 * std::numbers::pi / 2);
  const double hi = std::exp(0.12 * std::numbers::pi / 2);
  double prev = 0.0;
  for (double x = -50.0; x <= 50.0; x += 0.25) {
    const double a = weight(spec, kStable, 1.0, 1.0 + x);
    CHECK(a >= lo);
    CHECK(a <= hi);
    CHECK(a > prev);
    prev = a;
  }
}

TEST_CASE("weight spec validation") {
  CHECK_THROWS(WeightSpec{0.0, 1.0, 0}.validate());
  CHECK_THROWS(WeightSpec{1.0, -1.0, 0}.validate());
  CHECK_THROWS(WeightSpec{1.0, 1.0, -1}.validate());
  CHECK_NOTHROW(WeightSpec{1.0, 1.0, 3}.validate());
}

TEST_CASE("neighbour weight ratio") {
  // Each neighbour separately obeys a(η±1) ≤ exp(2·C1·c)·a(η); the sum of
  // both neighbours is bounded by twice that.
  for (double c : {0.01, 0.03, 0.1}) {
    for (double k : {0.5, 1.0, 2.0}) {
      const Params p = Params::from_k(c, k);
      const WeightSpec spec{4.0, 1.0, 0};
      const double cap = std::exp(2.0 * spec.C1 * c);
      for (double tau = -3.0; tau <= 3.0; tau += 0.37) {
        for (double eta = -6.0; eta <= 6.0; eta += 0.5) {
          const double a = weight(spec, p, tau, eta);
          const double up = weight(spec, p, tau, eta + 1.0);
          const double down = weight(spec, p, tau, eta - 1.0);
          CHECK(up <= cap * a);
          CHECK(down <= cap * a);
          CHECK(up + down <= 2.0 * cap * a);
        }
      }
    }
  }
}

TEST_CASE("the literal summed ratio inequality does not hold") {
  // Both neighbours are close to a(η) when c is small, so their sum is
  // about 2a(η) and exceeds exp(2·C1·c)·a(η).
  const WeightSpec spec{4.0, 1.0, 0};
  const double a = weight(spec, kStable, 0.0, 0.0);
  const double sum = weight(spec, kStable, 0.0, 1.0) + weight(spec, kStable, 0.0, -1.0);
  CHECK(sum > std::exp(2.0 * spec.C1 * kStable.c()) * a);
}

TEST_CASE("coefficient comparison on the grid where it holds") {
  for (double c : {0.01, 0.03, 0.1}) {
    for (double k : {1.0, 1.5, 2.0, 4.0}) {
      const Params p = Params::from_k(c, k);
      for (double x = -8.0; x <= 8.0; x += 0.125) {
        const double lhs = 2.0 * coupling(p, x + 1.0, 0.0) + 2.0 * coupling(p, x - 1.0, 0.0);
        const double rhs = 4.0 / (k * k) * c / (1.0 + x * x / (k * k));
        CHECK(lhs <= rhs);
      }
    }
  }
  // For small k the neighbour peak one unit away dominates the right side.
  const Params p = Params::from_L(0.03, 300.0);
  const double k = p.k();
  const double lhs = 2.0 * coupling(p, 2.0, 0.0) + 2.0 * coupling(p, 0.0, 0.0);
  CHECK(lhs > 4.0 / (k * k) * 0.03 / (1.0 + 1.0 / (k * k)));
}

TEST_CASE("higher order weights") {
  WeightSpec s1{4.0, 1.0, 1};
  CHECK(weight_Aj(s1, kStable, 0.0, 0.0) == 2.0);
  CHECK(weight_aj(s1, kStable, 0.0, 0.0) == 1.0);
  WeightSpec s0{4.0, 1.0, 0};
  CHECK(weight_Aj(s0, kStable, 1.3, -2.0) == weight(s0, kStable, 1.3, -2.0));
  CHECK(weight_aj(s0, kStable, 1.3, -2.0) == weight(s0, kStable, 1.3, -2.0));

  // A_2 = a_2 + A_0 + 2·A_1 with A_1 = a_1 + A_0.
  const double tau = 0.4, eta = 3.0;
  const double a = weight(s0, kStable, tau, eta);
  const double br = std::sqrt(1.0 + eta * eta);
  const double A1 = br * a + a;
  const double A2 = br * br * a + a + 2.0 * A1;
  const auto all = weight_A_all(s0, kStable, tau, eta, 2);
  REQUIRE(all.size() == 3);
  CHECK(all[0] == doctest::Approx(a));
  CHECK(all[1] == doctest::Approx(A1));
  CHECK(all[2] == doctest::Approx(A2));
  WeightSpec s2{4.0, 1.0, 2};
  CHECK(weight_Aj(s2, kStable, tau, eta) == doctest::Approx(A2));

  for (int j = 0; j <= 6; ++j) {
    WeightSpec s{4.0, 1.0, j};
    for (double e : {-7.0, -1.0, 0.0, 2.5, 9.0}) CHECK(weight_Aj(s, kStable, 0.3, e) >= weight_aj(s, kStable, 0.3, e));
  }
  CHECK(japanese_bracket(0.0) == 1.0);
  CHECK(japanese_bracket(3.0) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("functional basics") {
  const WeightSpec spec{4.0, 1.0, 0};
  const ModeLattice d = build_lattice(0.0, -3.0, 3.0, DeltaInit{2.0});
  CHECK(functional(d.at_time(2.0), spec, kStable) == doctest::Approx(1.0));
  CHECK(functional(d.at_time(0.7), spec, kStable) == doctest::Approx(weight(spec, kStable, 0.7, 2.0)));
  const ModeLattice zero(0.0, 0.0, -2, std::vector<Complex>(5));
  CHECK(functional(zero, spec, kStable) == 0.0);

  const ModeLattice r = build_lattice(0.0, -10.0, 10.0, RandomInit{4, -10.0, 10.0});
  const double mass = r.l2_norm() * r.l2_norm();
  const double f = functional(r, spec, kStable);
  CHECK(f >= std::exp(-0.12 * std::numbers::pi / 2) * mass);
  CHECK(f <= std::exp(0.12 * std::numbers::pi / 2) * mass);
}

TEST_CASE("decay monitor with c = 0 is monotone") {
  const Params p = Params::from_k(0.0, 1.0);
  const ModeLattice m = build_lattice(0.0, -10.0, 10.0, RandomInit{9, -10.0, 10.0});
  std::vector<double> times;
  for (int i = 1; i < 20; ++i) times.push_back(0.5 * i);
  const Trajectory t = integrate(m, p, IntegratorConfig{}, 10.0, times);
  const DecayReport rep = decay_monitor(t, WeightSpec{4.0, 1.0, 2}, p);
  CHECK(rep.precondition_met);
  CHECK(rep.passed());
  REQUIRE(rep.orders.size() == 3);
  for (const auto& o : rep.orders) CHECK(o.values.size() == t.samples.size());
}

TEST_CASE("decay monitor flags the regime outside the lyapunov condition") {
  const Params p = Params::from_L(0.03, 300.0);
  const ModeLattice m = build_lattice(0.0, -4.0, 4.0, DeltaInit{});
  const Trajectory t = integrate(m, p, IntegratorConfig{}, 0.5);
  const DecayReport rep = decay_monitor(t, WeightSpec::standard(p, 0), p);
  CHECK_FALSE(rep.precondition_met);
  CHECK(rep.regime_error.has_value());
  CHECK_FALSE(rep.passed());
}

TEST_CASE("sobolev and gevrey norms") {
  const ModeLattice d0 = build_lattice(0.0, -6.0, 6.0, DeltaInit{});
  for (double s : {0.0, 1.0, 3.5}) CHECK(norm(d0, SobolevNorm{s}) == 1.0);
  const ModeLattice d5 = build_lattice(0.0, -6.0, 6.0, DeltaInit{5.0});
  CHECK(norm(d5, GevreyNorm{1.0}) == doctest::Approx(148.4131591).epsilon(1e-9));

  const ModeLattice r = build_lattice(0.0, -10.0, 10.0, RandomInit{2, -10.0, 10.0});
  const double l2sq = r.l2_norm() * r.l2_norm();
  CHECK(std::abs(norm(r, SobolevNorm{0.0}) - l2sq) <= 1e-14 * l2sq);
  double prev = 0.0;
  for (double s = 0.0; s <= 4.0; s += 0.5) {
    const double v = norm(r, SobolevNorm{s});
    CHECK(v >= prev);
    prev = v;
  }

  const ModeLattice far = build_lattice(0.0, 0.0, 800.0, DeltaInit{800.0});
  CHECK_THROWS_AS(norm(far, GevreyNorm{1.0}), std::overflow_error);
  CHECK(log_norm(far, GevreyNorm{1.0}) == doctest::Approx(800.0));
  const ModeLattice zero(0.0, 0.0, -1, std::vector<Complex>(3));
  CHECK(std::isinf(log_norm(zero, SobolevNorm{1.0})));
}
