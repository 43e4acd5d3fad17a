#include "shearlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <system_error>

#include "shearlab/cascade.hpp"
#include "shearlab/csv.hpp"
#include "shearlab/duhamel.hpp"
#include "shearlab/errors.hpp"
#include "shearlab/integrator.hpp"
#include "shearlab/lyapunov.hpp"
#include "shearlab/regime.hpp"
#include "shearlab/sweep.hpp"

namespace shearlab {

namespace {

// Accumulates report lines and the overall verdict.
class Report {
 public:
  void line(const std::string& text) { os_ << text << '\n'; }

  template <typename... Args>
  void linef(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    line(buf);
  }

  // An asserted property: failing it turns the exit code to 1.
  void check(const std::string& name, bool ok, const std::string& detail) {
    line(std::string(ok ? "PASS " : "FAIL ") + name + ": " + detail);
    if (!ok) failed_ = true;
  }

  bool failed() const noexcept { return failed_; }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  bool failed_ = false;
};

std::string fmt(double v) { return format_double(v); }

// Uniform grid t0, t0+h, …, ending exactly at t1.
std::vector<double> sample_grid(double t0, double t1, double every) {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / every - 1e-9));
  for (std::size_t i = 1; i < n; ++i) out.push_back(t0 + static_cast<double>(i) * every);
  if (t1 > t0) out.push_back(t1);
  return out;
}

// Smallest lattice window covering the default radius, the initial data and
// any explicit bounds from the config.
std::pair<double, double> window_for(const RunConfig& cfg, LatticeIndex radius) {
  const double es = cfg.params->eta_star();
  double lo = es - static_cast<double>(radius);
  double hi = es + static_cast<double>(radius);
  auto cover = [&](double eta) {
    lo = std::min(lo, es + std::floor(eta - es));
    hi = std::max(hi, es + std::ceil(eta - es));
  };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeltaInit>) {
          cover(v.eta0);
        } else if constexpr (std::is_same_v<T, ModesInit>) {
          for (const auto& m : v.modes) cover(m.first);
        } else {
          cover(v.eta_lo);
          cover(v.eta_hi);
        }
      },
      cfg.init);
  if (cfg.eta_min) lo = *cfg.eta_min;
  if (cfg.eta_max) hi = *cfg.eta_max;
  return {lo, hi};
}

ModeLattice initial_lattice(const RunConfig& cfg, LatticeIndex radius) {
  InitSpec init = cfg.init;
  // The default delta sits on the lattice point η*.
  if (auto* d = std::get_if<DeltaInit>(&init); d && d->eta0 == 0.0) d->eta0 = cfg.params->eta_star();
  RunConfig patched = cfg;
  patched.init = init;
  const auto [lo, hi] = window_for(patched, radius);
  return build_lattice(cfg.params->eta_star(), lo, hi, init);
}

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t({"tau", "eta", "re_omega", "im_omega", "abs_omega"});
  for (const ModeLattice& s : traj.samples) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Complex w = s.amplitudes()[i];
      t.add_row({fmt(s.tau()), fmt(s.eta_at(i)), fmt(w.real()), fmt(w.imag()), fmt(std::abs(w))});
    }
  }
  return t;
}

void report_gronwall(Report& rep, const Trajectory& traj, const Params& params) {
  const GronwallReport g = gronwall_check(traj, params);
  rep.check("gronwall", g.passed,
            "worst log margin " + fmt(g.worst_log_margin) + ", saturation " + fmt(g.saturation));
}

RunOutcome run_simulate(const RunConfig& cfg, Report& rep) {
  const Params& p = *cfg.params;
  const ModeLattice w0 = initial_lattice(cfg, cfg.integrator.window.initial_radius);
  const auto times = sample_grid(0.0, cfg.simulate.tau_end, cfg.simulate.sample_every);
  const Trajectory traj = integrate(w0, p, cfg.integrator, cfg.simulate.tau_end, times);
  rep.linef("steps: %zu accepted, %zu rejected; boundary max %.6g", traj.stats.accepted,
            traj.stats.rejected, traj.boundary_max);

  report_gronwall(rep, traj, p);

  const Complex s0 = total_sum(w0);
  const double scale = w0.l1_norm();
  double worst = 0.0;
  for (const ModeLattice& s : traj.samples) worst = std::max(worst, std::abs(total_sum(s) - s0));
  if (traj.boundary_max < 1e-12) {
    rep.check("conservation", worst <= 1e-8 * scale,
              "max |sum - sum0| " + fmt(worst) + " vs " + fmt(1e-8 * scale));
  } else {
    rep.line("note conservation: not asserted, boundary max " + fmt(traj.boundary_max) +
             "; max |sum - sum0| " + fmt(worst));
  }

  if (classify_regime(p).pathsum_stable) {
    const EnvelopeReport env = stability_envelope_check(traj, p);
    rep.check("stability_envelope", env.passed(),
              std::to_string(env.violations) + " violations in " + std::to_string(env.checked) +
                  " checks, worst ratio " + fmt(env.worst_ratio) + " at tau " +
                  fmt(env.worst_tau) + ", eta " + fmt(env.worst_eta));
  } else {
    rep.line("note stability_envelope: not applicable outside 2*pi*c*L < 1");
  }
  return {0, {}, {{"trajectory.csv", trajectory_table(traj).str()}}};
}

RunOutcome run_lyapunov(const RunConfig& cfg, Report& rep) {
  const Params& p = *cfg.params;
  const auto cls = classify_regime(p);
  if (!cls.lyapunov_stable) {
    throw RegimeError("lyapunov monitoring requires 4 - 2*exp(2*c*L) > 0 (value " +
                      fmt(4.0 - 2.0 * std::exp(2.0 * p.c() * p.L())) + ")");
  }
  const auto& lc = cfg.lyapunov;
  const WeightSpec spec{*lc.C1, *lc.C2, lc.order};
  spec.validate();
  const ModeLattice w0 = initial_lattice(cfg, cfg.integrator.window.initial_radius);
  const auto times = sample_grid(0.0, lc.tau_end, lc.sample_every);
  const Trajectory traj = integrate(w0, p, cfg.integrator, lc.tau_end, times);
  const DecayReport dr = decay_monitor(traj, spec, p, lc.tol_rel);

  CsvTable t({"tau", "order", "functional"});
  for (const OrderMonitor& m : dr.orders) {
    rep.check("monotone_order_" + std::to_string(m.order), m.monotone,
              "max relative increase " + fmt(m.max_rel_increase) + " (tol " + fmt(lc.tol_rel) + ")");
  }
  for (std::size_t n = 0; n < traj.samples.size(); ++n) {
    for (const OrderMonitor& m : dr.orders) {
      t.add_row({fmt(m.tau[n]), std::to_string(m.order), fmt(m.values[n])});
    }
  }
  report_gronwall(rep, traj, p);
  return {0, {}, {{"lyapunov.csv", t.str()}}};
}

RunOutcome run_pathsum(const RunConfig& cfg, Report& rep) {
  const Params& p = *cfg.params;
  const auto& pc = cfg.pathsum;
  const ModeLattice w0 = initial_lattice(cfg, 3).at_time(pc.t0);
  PathLimits limits;
  limits.window = {{w0.first(), w0.last()}};
  const ModeLattice ps = partial_sum(w0, p, pc.t0, pc.t1, pc.J, limits);

  IntegratorConfig ic = cfg.integrator;
  ic.window.extend = false;
  const ModeLattice ode = pc.t1 > pc.t0 ? integrate(w0, p, ic, pc.t1).final() : w0;

  const double tail = series_tail_bound(p, pc.t1 - pc.t0, pc.J) * w0.l2_norm();
  CsvTable t({"eta", "re_partial", "im_partial", "re_ode", "im_ode", "abs_diff"});
  double worst = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const LatticeIndex n = ps.first() + static_cast<LatticeIndex>(i);
    const Complex a = ps.amplitudes()[i];
    const Complex b = ode.at(n);
    const double diff = std::abs(a - b);
    worst = std::max(worst, diff);
    t.add_row({fmt(ps.eta_at(i)), fmt(a.real()), fmt(a.imag()), fmt(b.real()), fmt(b.imag()),
               fmt(diff)});
  }
  rep.check("tail_bound", worst <= tail,
            "max |partial - ode| " + fmt(worst) + " vs tail bound " + fmt(tail));
  return {0, {}, {{"pathsum.csv", t.str()}}};
}

RunOutcome run_cascade_cmd(const RunConfig& cfg, Report& rep) {
  const Params& p = *cfg.params;
  const ModeLattice w0 = initial_lattice(cfg, 0);
  const auto& cc = cfg.cascade;
  const CascadeReport cr = run_cascade(p, w0, cc.J, cfg.integrator);
  for (const auto& w : cr.warnings) rep.line("warning: " + w);
  rep.linef("steps: %zu accepted, %zu rejected", cr.stats.accepted, cr.stats.rejected);

  CsvTable t({"j", "T_j", "res_amp", "sup_amp", "dominance", "ratio", "d_pow_j"});
  for (const CascadeStep& st : cr.steps) {
    t.add_row({std::to_string(st.j), fmt(st.T), fmt(st.resonant_amplitude), fmt(st.sup_amplitude),
               st.dominant ? "true" : "false", format_double(st.ratio),
               fmt(std::pow(cr.d_grow, static_cast<double>(st.j)))});
  }

  const double diag = 0.75 * cr.r_exact;
  for (const CascadeStep& st : cr.steps) {
    if (st.ratio) {
      rep.line("diagnostic rho_" + std::to_string(st.j) + " = " + fmt(*st.ratio) +
               " vs 3/4*r_exact = " + fmt(diag));
    }
  }

  if (cr.regime == Regime::Unstable) {
    const bool dominance = std::all_of(cr.steps.begin(), cr.steps.end(),
                                       [](const CascadeStep& s) { return s.dominant; });
    rep.check("dominance", dominance, "resonant >= 0.5*sup at every T_j");
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const CascadeStep& st : cr.steps) {
      if (st.j < cc.J) min_ratio = std::min(min_ratio, st.ratio.value_or(0.0));
    }
    rep.check("ratio", min_ratio >= cc.min_ratio,
              "min rho_j " + fmt(min_ratio) + " vs " + fmt(cc.min_ratio));
    const GrowthCheck g = verify_growth(cr);
    rep.check("growth", g.verdict == GrowthVerdict::Passed,
              "d = " + fmt(g.d) + ", worst |omega|/d^j " + fmt(g.worst_margin));
  } else {
    rep.line("note: regime is not UNSTABLE; cascade properties are reported, not asserted");
  }
  return {0, {}, {{"cascade.csv", t.str()}}};
}

RunOutcome run_classify(const RunConfig& cfg, Report& rep) {
  const auto cls = classify_regime(*cfg.params);
  rep.line("label: " + std::string(to_string(cls.label)));
  CsvTable t({"condition", "value", "threshold", "satisfied"});
  for (const auto& c : cls.conditions) {
    t.add_row({c.name, fmt(c.value), fmt(c.threshold), c.satisfied ? "true" : "false"});
  }
  return {0, {}, {{"classify.csv", t.str()}}};
}

RunOutcome run_sweep_cmd(const RunConfig& cfg, Report& rep) {
  SweepGrid grid;
  grid.c = cfg.sweep.c;
  grid.L = cfg.sweep.L;
  grid.J = cfg.sweep.J;
  grid.stable_envelope = cfg.sweep.stable_envelope;
  if (cfg.params) grid.eta_star = cfg.params->eta_star();
  const auto rows = run_sweep(grid, cfg.integrator, cfg.workers);
  for (const SweepRow& r : rows) {
    const std::string where = "c=" + fmt(r.c) + " L=" + fmt(r.L);
    if (r.status != "ok") {
      rep.check("point " + where, false, r.status);
    } else if (r.verdict == "not_applicable") {
      rep.line("note point " + where + ": " + r.label + ", no check applies");
    } else {
      rep.check("point " + where, r.verdict == "passed",
                r.label + " " + r.check + ", max ratio " + fmt(r.max_ratio) + ", sup growth " +
                    fmt(r.sup_growth));
    }
  }
  return {0, {}, {{"sweep.csv", sweep_table(rows).str()}}};
}

}  // namespace

RunOutcome execute(const RunConfig& config) {
  Report rep;
  rep.line("command: " + std::string(to_string(config.command)));
  if (config.params) rep.line("params: " + config.params->describe());
  rep.line("config:");
  rep.line(config.echo());

  RunOutcome out;
  try {
    switch (config.command) {
      case Command::Simulate:
        out = run_simulate(config, rep);
        break;
      case Command::Lyapunov:
        out = run_lyapunov(config, rep);
        break;
      case Command::Pathsum:
        out = run_pathsum(config, rep);
        break;
      case Command::Cascade:
        out = run_cascade_cmd(config, rep);
        break;
      case Command::Classify:
        out = run_classify(config, rep);
        break;
      case Command::Sweep:
        out = run_sweep_cmd(config, rep);
        break;
    }
  } catch (const std::exception& e) {
    rep.line(std::string("error: ") + e.what());
    rep.line("exit: 2");
    return {kExitError, rep.str(), {}};
  }
  out.exit_code = rep.failed() ? kExitPropertyFailed : kExitOk;
  rep.line("exit: " + std::to_string(out.exit_code));
  out.report = rep.str();
  return out;
}

int write_outcome(const RunOutcome& outcome, const std::filesystem::path& out_dir) {
  try {
    std::filesystem::create_directories(out_dir);
    if (outcome.exit_code != kExitError) {
      for (const auto& [name, contents] : outcome.files) write_file_atomic(out_dir / name, contents);
    }
    write_file_atomic(out_dir / "report.txt", outcome.report);
  } catch (const std::exception&) {
    return kExitError;
  }
  return outcome.exit_code;
}

int run(std::string_view config_text, const ConfigOverrides& overrides,
        const std::filesystem::path& out_dir) {
  RunOutcome outcome;
  try {
    outcome = execute(parse_config(config_text, overrides));
  } catch (const std::exception& e) {
    outcome = {kExitError, std::string("error: ") + e.what() + "\nexit: 2\n", {}};
  }
  return write_outcome(outcome, out_dir);
}

}  // namespace shearlab
