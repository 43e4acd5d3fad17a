#include "shearlab/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "shearlab/errors.hpp"
#include "shearlab/integrator.hpp"
#include "shearlab/quadrature.hpp"

namespace shearlab {

Path::Path(double eta_star, std::vector<LatticeIndex> indices)
    : eta_star_(eta_star), indices_(std::move(indices)) {
  if (indices_.size() < 2) throw std::invalid_argument("Path: length must be at least 1");
  for (std::size_t i = 0; i + 1 < indices_.size(); ++i) {
    const LatticeIndex d = indices_[i + 1] - indices_[i];
    if (d != 1 && d != -1) throw std::invalid_argument("Path: steps must be nearest-neighbour");
  }
}

std::size_t path_distance(LatticeIndex from, LatticeIndex to) noexcept {
  if (from == to) return 2;
  return static_cast<std::size_t>(from > to ? from - to : to - from);
}

namespace {

bool in_window(const PathLimits& limits, LatticeIndex n) {
  if (!limits.window) return true;
  return n >= limits.window->first && n <= limits.window->second;
}

// Walk counts from `from` after `length` steps, indexed by position − (from − length).
std::vector<long double> walk_counts(LatticeIndex from, std::size_t length, const PathLimits& limits) {
  const auto span = static_cast<LatticeIndex>(length);
  const LatticeIndex base = from - span;
  std::vector<long double> cur(static_cast<std::size_t>(2 * span + 1), 0.0L);
  if (!in_window(limits, from)) return cur;
  cur[static_cast<std::size_t>(from - base)] = 1.0L;
  std::vector<long double> next(cur.size());
  for (std::size_t s = 0; s < length; ++s) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0.0L) continue;
      const LatticeIndex pos = base + static_cast<LatticeIndex>(i);
      for (LatticeIndex d : {LatticeIndex{-1}, LatticeIndex{1}}) {
        const LatticeIndex q = pos + d;
        if (!in_window(limits, q)) continue;
        next[static_cast<std::size_t>(q - base)] += cur[i];
      }
    }
    cur.swap(next);
  }
  return cur;
}

// Depth-first walk generation; visits in lexicographic order (down before up).
void for_each_walk(LatticeIndex from, std::size_t length, const PathLimits& limits,
                   std::optional<LatticeIndex> to,
                   const std::function<void(const std::vector<LatticeIndex>&)>& visit) {
  std::vector<LatticeIndex> nodes{from};
  std::function<void()> rec = [&]() {
    const std::size_t done = nodes.size() - 1;
    if (done == length) {
      if (!to || nodes.back() == *to) visit(nodes);
      return;
    }
    const std::size_t remaining = length - done;
    for (LatticeIndex d : {LatticeIndex{-1}, LatticeIndex{1}}) {
      const LatticeIndex q = nodes.back() + d;
      if (!in_window(limits, q)) continue;
      if (to) {
        const auto gap = static_cast<std::size_t>(q > *to ? q - *to : *to - q);
        if (gap > remaining - 1) continue;
      }
      nodes.push_back(q);
      rec();
      nodes.pop_back();
    }
  };
  if (in_window(limits, from)) rec();
}

void guard_count(long double total, const PathLimits& limits, const char* what) {
  if (total > static_cast<long double>(limits.max_paths)) {
    std::ostringstream os;
    os << what << ": " << static_cast<double>(total) << " paths exceed the cap of "
       << limits.max_paths << "; reduce the path length or the initial support";
    throw ResourceError(os.str());
  }
}

}  // namespace

long double count_paths(LatticeIndex from, LatticeIndex to, std::size_t length,
                        const PathLimits& limits) {
  const auto span = static_cast<LatticeIndex>(length);
  if (to < from - span || to > from + span) return 0.0L;
  const auto counts = walk_counts(from, length, limits);
  return counts[static_cast<std::size_t>(to - (from - span))];
}

std::vector<Path> enumerate_paths(double eta_star, LatticeIndex from, LatticeIndex to,
                                  std::size_t max_len, const PathLimits& limits) {
  if (max_len < 1) throw std::invalid_argument("enumerate_paths: max_len must be >= 1");
  long double total = 0.0L;
  for (std::size_t len = 1; len <= max_len; ++len) total += count_paths(from, to, len, limits);
  guard_count(total, limits, "enumerate_paths");

  std::vector<Path> out;
  out.reserve(static_cast<std::size_t>(total));
  for (std::size_t len = 1; len <= max_len; ++len) {
    for_each_walk(from, len, limits, to,
                  [&](const std::vector<LatticeIndex>& nodes) { out.emplace_back(eta_star, nodes); });
  }
  return out;
}

std::vector<Path> enumerate_paths_from(double eta_star, LatticeIndex from, std::size_t length,
                                       const PathLimits& limits) {
  if (length < 1) throw std::invalid_argument("enumerate_paths_from: length must be >= 1");
  long double total = 0.0L;
  for (long double n : walk_counts(from, length, limits)) total += n;
  guard_count(total, limits, "enumerate_paths_from");
  std::vector<Path> out;
  for_each_walk(from, length, limits, std::nullopt,
                [&](const std::vector<LatticeIndex>& nodes) { out.emplace_back(eta_star, nodes); });
  return out;
}

namespace {

double factor_scale(const Params& params, PathConvention convention) {
  return convention == PathConvention::Unsigned ? params.c() : 0.5 * params.c();
}

// ∫_{t0}^{t} scale/(k² + (eta − s)²) ds.
double lorentz_integral(double scale, double k, double eta, double t0, double t) {
  return scale / k * (std::atan((t - eta) / k) - std::atan((t0 - eta) / k));
}

}  // namespace

double single_step_integral(const Params& params, double eta, double t0, double t1,
                            PathConvention convention) noexcept {
  return lorentz_integral(factor_scale(params, convention), params.k(), eta, t0, t1);
}

PathIntegralResult path_integral(const Path& path, const Params& params, double t0, double t1,
                                 PathConvention convention, const PathIntegralOptions& options) {
  if (!(t1 > t0)) throw std::invalid_argument("path_integral: requires t0 < t1");
  const std::size_t m = path.length();
  const double k = params.k();
  const double scale = factor_scale(params, convention);

  std::vector<double> sign(m), eta(m), bound(m);
  for (std::size_t i = 0; i < m; ++i) {
    sign[i] = convention == PathConvention::Unsigned ? 1.0 : static_cast<double>(path.sign(i));
    eta[i] = path.node(i);
    bound[i] = lorentz_integral(scale, k, eta[i], t0, t1);
  }

  PathIntegralResult res;
  res.convention = convention;
  res.bound_product = 1.0;
  for (double b : bound) res.bound_product *= b;

  if (params.c() == 0.0) return res;
  if (m == 1) {
    res.value = sign[0] * bound[0];
    res.panels = 1;
    return res;
  }

  // after[i]: amplification of an error made while integrating level i.
  std::vector<double> after(m, 1.0);
  for (std::size_t i = m - 1; i-- > 0;) after[i] = after[i + 1] * bound[i + 1];

  const double tol = std::max(options.abs_tol, options.rel_tol * res.bound_product);
  const ChebyshevRule rule(options.chebyshev_degree);
  const std::size_t np = rule.size();
  const auto x = rule.nodes();

  std::vector<double> cuts{t0, t1};
  for (double e : eta) {
    for (double s : {0.0, 1.0, 4.0, 16.0, 64.0, 256.0}) {
      for (double sgn : {-1.0, 1.0}) {
        const double p = e + sgn * s * k;
        if (p > t0 && p < t1) cuts.push_back(p);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> s_nodes(np), level(np), g(np), run(np), coeff(np);
  std::vector<double> start(m + 1, 0.0);
  std::vector<double> indicator;

  for (;;) {
    const std::size_t panels = cuts.size() - 1;
    indicator.assign(panels, 0.0);
    std::fill(start.begin(), start.end(), 0.0);
    double total_error = 0.0;

    for (std::size_t p = 0; p < panels; ++p) {
      const double a = cuts[p];
      const double b = cuts[p + 1];
      const double half = 0.5 * (b - a);
      for (std::size_t q = 0; q < np; ++q) s_nodes[q] = a + half * (x[q] + 1.0);
      s_nodes.front() = a;
      s_nodes.back() = b;

      // Level 1 in closed form.
      for (std::size_t q = 0; q < np; ++q) {
        level[q] = sign[0] * lorentz_integral(scale, k, eta[0], t0, s_nodes[q]);
      }
      start[1] = level.back();

      for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t q = 0; q < np; ++q) {
          const double d = eta[i] - s_nodes[q];
          g[q] = sign[i] * scale / (k * k + d * d) * level[q];
        }
        rule.running_integral(g, run);
        rule.coefficients(g, coeff);
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        const double tail = std::abs(coeff[np - 2]) + std::abs(coeff[np - 1]);
        const double ind = tail * (b - a) * after[i];
        // Coefficients at the rounding floor cannot be improved by splitting.
        if (tail > 256.0 * std::numeric_limits<double>::epsilon() * gmax) {
          indicator[p] = std::max(indicator[p], ind);
        }
        total_error += ind;
        for (std::size_t q = 0; q < np; ++q) level[q] = start[i + 1] + half * run[q];
        start[i + 1] = level.back();
      }
    }

    std::vector<double> next{cuts.front()};
    bool refined = false;
    std::size_t worst = 0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = cuts[p];
      const double b = cuts[p + 1];
      if (indicator[p] > indicator[worst]) worst = p;
      if (indicator[p] > tol * (b - a) / (t1 - t0)) {
        const double mid = 0.5 * (a + b);
        if (!(mid > a && mid < b) || (b - a) < 1e-13 * (t1 - t0)) {
          std::ostringstream os;
          os.precision(17);
          os << "path_integral: quadrature did not converge; worst subinterval [" << a << ", " << b
             << "] with error indicator " << indicator[p];
          throw QuadratureError(os.str());
        }
        next.push_back(mid);
        refined = true;
      }
      next.push_back(b);
    }
    if (!refined) {
      res.value = start[m];
      res.quadrature_error = total_error;
      res.panels = panels;
      return res;
    }
    if (next.size() - 1 > options.max_panels) {
      std::ostringstream os;
      os.precision(17);
      os << "path_integral: more than " << options.max_panels << " panels needed; worst subinterval ["
         << cuts[worst] << ", " << cuts[worst + 1] << "] with error indicator " << indicator[worst];
      throw QuadratureError(os.str());
    }
    cuts.swap(next);
  }
}

ModeLattice partial_sum(const ModeLattice& omega0, const Params& params, double t0, double t1,
                        std::size_t J, const PathLimits& limits, const PathIntegralOptions& options) {
  if (!(t1 > t0)) throw std::invalid_argument("partial_sum: requires t0 < t1");
  PathLimits walk_limits = limits;
  walk_limits.window = std::pair{omega0.first(), omega0.last()};

  const auto amps = omega0.amplitudes();
  long double total = 0.0L;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (amps[i] == Complex{0.0, 0.0}) continue;
    const LatticeIndex src = omega0.first() + static_cast<LatticeIndex>(i);
    for (std::size_t len = 1; len <= J; ++len) {
      for (long double n : walk_counts(src, len, walk_limits)) total += n;
    }
  }
  guard_count(total, walk_limits, "partial_sum");

  std::vector<Complex> out(amps.begin(), amps.end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const Complex w0 = amps[i];
    if (w0 == Complex{0.0, 0.0}) continue;
    const LatticeIndex src = omega0.first() + static_cast<LatticeIndex>(i);
    for (std::size_t len = 1; len <= J; ++len) {
      for_each_walk(src, len, walk_limits, std::nullopt, [&](const std::vector<LatticeIndex>& nodes) {
        const Path path(omega0.eta_star(), nodes);
        const auto r = path_integral(path, params, t0, t1, PathConvention::ExactHalfSigned, options);
        out[static_cast<std::size_t>(nodes.back() - omega0.first())] += w0 * r.value;
      });
    }
  }
  return ModeLattice(t1, omega0.eta_star(), omega0.first(), std::move(out));
}

double series_rate(const Params& params) noexcept {
  return params.c() * params.L() * params.L();
}

double series_term(const Params& params, double t, std::size_t j) {
  if (!(t >= 0.0)) throw std::invalid_argument("series_term: t must be >= 0");
  const double x = series_rate(params) * t;
  if (j == 0) return 1.0;
  if (x == 0.0) return 0.0;
  const double jd = static_cast<double>(j);
  return std::exp(jd * std::log(x) - std::lgamma(jd + 1.0));
}

double series_tail_bound(const Params& params, double t, std::size_t J) {
  if (!(t >= 0.0)) throw std::invalid_argument("series_tail_bound: t must be >= 0");
  const double x = series_rate(params) * t;
  if (x == 0.0) return 0.0;
  if (x > 700.0) return std::numeric_limits<double>::infinity();
  // Terms rise until j ≈ x and then fall factorially.
  double sum = 0.0;
  for (std::size_t j = J + 1;; ++j) {
    const double term = series_term(params, t, j);
    sum += term;
    if (static_cast<double>(j) > x && term <= 1e-18 * sum) break;
    if (j > J + 100000) break;
  }
  return sum;
}

double series_tail_closed_form(const Params& params, double t, std::size_t J) {
  const double x = series_rate(params) * t;
  return series_term(params, t, J + 1) * std::exp(x);
}

NonresonantBound nonresonant_bound(const Params& params) noexcept {
  const double k = params.k();
  return {4.0 * params.c(), params.c() / (k * k + 0.25)};
}

double resonance_gain(const Params& params) noexcept {
  return (2.0 * params.c() / params.k()) * std::atan(1.0 / (2.0 * params.k()));
}

SmallnessReport smallness_check(const Params& params) {
  const double r = resonance_gain(params);
  const double delta = nonresonant_bound(params).delta;
  const double chain = 8.0 * std::numbers::pi * params.c() * params.c() * params.L();
  SmallnessReport rep;
  rep.conditions = {
      {"r*delta < 1/4", r * delta, 0.25, r * delta < 0.25},
      {"delta < 1/4", delta, 0.25, delta < 0.25},
      {"r > 10", r, 10.0, r > 10.0},
  };
  rep.chain = {
      {"r*delta <= 8*pi*c^2*L", r * delta, chain, r * delta <= chain},
      {"8*pi*c^2*L < 1/4", chain, 0.25, chain < 0.25},
  };
  rep.passed = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                           [](const SmallnessCondition& c) { return c.satisfied; });
  return rep;
}

double resonant_path_bound(double delta, double r, LatticeIndex eta0, LatticeIndex eta,
                           LatticeIndex j) {
  if (!(2.0 * delta < 1.0)) throw DomainError("resonant_path_bound: requires 2*delta < 1");
  if (!(2.0 * r * delta < 1.0)) throw DomainError("resonant_path_bound: requires 2*r*delta < 1");
  const auto dist_in = static_cast<double>(eta0 > j ? eta0 - j : j - eta0);
  const LatticeIndex up = eta - j + 1;
  const LatticeIndex down = eta - j - 1;
  const auto dist_out = static_cast<double>(std::min(up < 0 ? -up : up, down < 0 ? -down : down));
  const double pre = 1.0 / std::pow(1.0 - 2.0 * delta, 3) / (1.0 - 2.0 * r * delta);
  return pre * r * std::pow(2.0 * delta, dist_in + dist_out);
}

double resonant_path_bound(const Params& params, LatticeIndex eta0, LatticeIndex eta,
                           LatticeIndex j) {
  return resonant_path_bound(params.delta(), params.r_unsigned(), eta0, eta, j);
}

EnvelopeReport stability_envelope_check(const Trajectory& trajectory, const Params& params) {
  EnvelopeReport rep;
  rep.d = params.d_stab();
  const double q = 2.0 * rep.d;
  if (!(q < 1.0)) throw DomainError("stability envelope requires 2*c*pi/k < 1");
  if (trajectory.samples.empty()) return rep;

  const ModeLattice& w0 = trajectory.initial();
  std::vector<std::pair<LatticeIndex, double>> support;
  for (std::size_t i = 0; i < w0.size(); ++i) {
    const double a = std::abs(w0.amplitudes()[i]);
    if (a > 0.0) support.emplace_back(w0.first() + static_cast<LatticeIndex>(i), a);
  }
  const double pre = 1.0 / (1.0 - q);
  auto envelope = [&](LatticeIndex n) {
    double s = 0.0;
    for (const auto& [m, a] : support) {
      s += a * std::pow(q, static_cast<double>(path_distance(m, n)));
    }
    return pre * s;
  };

  for (const ModeLattice& s : trajectory.samples) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const LatticeIndex n = s.first() + static_cast<LatticeIndex>(i);
      const double diff = std::abs(s.amplitudes()[i] - w0.at(n));
      const double env = envelope(n);
      ++rep.checked;
      const double ratio = env > 0.0 ? diff / env : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_tau = s.tau();
        rep.worst_eta = s.eta_at(i);
      }
      if (!(diff <= env)) ++rep.violations;
    }
  }
  return rep;
}

}  // namespace shearlab
