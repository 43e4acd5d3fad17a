#include "shearlab/config.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "shearlab/errors.hpp"

namespace shearlab {

using nlohmann::json;

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::Simulate, "simulate"}, {Command::Lyapunov, "lyapunov"},
    {Command::Pathsum, "pathsum"},   {Command::Cascade, "cascade"},
    {Command::Classify, "classify"}, {Command::Sweep, "sweep"},
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

// Parses "p/q" or a plain decimal string.
double parse_number_text(const std::string& path, const std::string& text) {
  auto parse_one = [&](std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail(path, "cannot parse number \"" + text + "\"");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_one(text);
  const double num = parse_one(std::string_view(text).substr(0, slash));
  const double den = parse_one(std::string_view(text).substr(slash + 1));
  if (den == 0.0) fail(path, "zero denominator in \"" + text + "\"");
  return num / den;
}

// A JSON object whose keys are consumed one by one; leftovers are unknown keys.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? required_number(key) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return required_number(key);
  }

  double required_number(const std::string& key) {
    if (!has(key)) fail(child(key), "missing required key");
    return to_number(child(key), raw(key));
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_unsigned()) fail(child(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(child(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    if (!has(key)) fail(child(key), "missing required key");
    const json& v = raw(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> number_list(const std::string& key) {
    if (!has(key)) fail(child(key), "missing required key");
    const json& v = raw(key);
    if (!v.is_array()) fail(child(key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(to_number(child(key) + "[" + std::to_string(i) + "]", v[i]));
    }
    return out;
  }

  std::optional<Section> sub(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return Section(raw(key), child(key));
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.contains(key)) fail(child(key), "unknown key");
    }
  }

  static double to_number(const std::string& path, const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_number_text(path, v.get<std::string>());
    fail(path, "expected a number or a \"p/q\" string");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

Params parse_params(Section& s) {
  const double c = s.required_number("c");
  const double eta_star = s.number("eta_star", 0.0);
  const auto k = s.optional_number("k");
  const auto L = s.optional_number("L");
  if (!k && !L) fail(s.child("k"), "one of k or L is required");
  if (k && L) {
    const double prod = *k * *L;
    if (!(std::abs(prod - 1.0) <= 1e-12)) {
      fail(s.child("k"), "kL≠1 (k=" + std::to_string(*k) + ", L=" + std::to_string(*L) + ")");
    }
  }
  try {
    return L ? Params::from_L(c, *L, eta_star) : Params::from_k(c, *k, eta_star);
  } catch (const std::invalid_argument& e) {
    fail(s.child("c"), e.what());
  }
}

void parse_window(Section& s, WindowPolicy& w) {
  w.initial_radius = static_cast<LatticeIndex>(
      s.unsigned_integer("initial_radius", static_cast<std::uint64_t>(w.initial_radius)));
  w.growth_margin = static_cast<LatticeIndex>(
      s.unsigned_integer("growth_margin", static_cast<std::uint64_t>(w.growth_margin)));
  w.edge_tol = s.number("edge_tol", w.edge_tol);
  w.max_modes = s.unsigned_integer("max_modes", w.max_modes);
  w.extend = s.boolean("extend", w.extend);
  s.finish();
}

void parse_integrator(Section& s, IntegratorConfig& ic) {
  ic.rel_tol = s.number("rel_tol", ic.rel_tol);
  ic.abs_tol = s.number("abs_tol", ic.abs_tol);
  ic.max_step = s.number("max_step", ic.max_step);
  ic.resonance_cap_factor = s.number("resonance_cap_factor", ic.resonance_cap_factor);
  ic.resonance_zone_factor = s.number("resonance_zone_factor", ic.resonance_zone_factor);
  ic.max_steps = s.unsigned_integer("max_steps", ic.max_steps);
  if (auto w = s.sub("window")) parse_window(*w, ic.window);
  s.finish();
  try {
    ic.validate();
  } catch (const std::invalid_argument& e) {
    fail(s.child("rel_tol"), e.what());
  }
}

InitSpec parse_init(Section& s, const std::optional<std::uint64_t>& seed) {
  const std::string kind = s.text("kind");
  if (kind == "delta") {
    DeltaInit d;
    d.eta0 = s.number("eta0", 0.0);
    d.value = {s.number("re", 1.0), s.number("im", 0.0)};
    s.finish();
    return d;
  }
  if (kind == "modes") {
    ModesInit m;
    if (!s.has("modes")) fail(s.child("modes"), "missing required key");
    const json& arr = s.raw("modes");
    const std::string path = s.child("modes");
    if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty array of [eta, re, im]");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      const json& e = arr[i];
      if (!e.is_array() || e.size() < 2 || e.size() > 3) fail(p, "expected [eta, re] or [eta, re, im]");
      const double im = e.size() == 3 ? Section::to_number(p, e[2]) : 0.0;
      m.modes.emplace_back(Section::to_number(p, e[0]), Complex{Section::to_number(p, e[1]), im});
    }
    s.finish();
    return m;
  }
  if (kind == "random") {
    RandomInit r;
    r.eta_lo = s.number("eta_lo", r.eta_lo);
    r.eta_hi = s.number("eta_hi", r.eta_hi);
    s.finish();
    if (!seed) fail("seed", "random initial data requires a seed");
    r.seed = *seed;
    return r;
  }
  fail(s.child("kind"), "expected delta, modes or random, got \"" + kind + "\"");
}

json init_to_json(const InitSpec& init) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeltaInit>) {
          return {{"kind", "delta"}, {"eta0", v.eta0}, {"re", v.value.real()}, {"im", v.value.imag()}};
        } else if constexpr (std::is_same_v<T, ModesInit>) {
          json modes = json::array();
          for (const auto& [eta, val] : v.modes) modes.push_back({eta, val.real(), val.imag()});
          return {{"kind", "modes"}, {"modes", modes}};
        } else {
          return {{"kind", "random"}, {"eta_lo", v.eta_lo}, {"eta_hi", v.eta_hi}};
        }
      },
      init);
}

}  // namespace

std::string_view to_string(Command command) noexcept {
  for (const auto& [c, name] : kCommandNames) {
    if (c == command) return name;
  }
  return "classify";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (const auto& [c, n] : kCommandNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  Section root(doc, "");
  RunConfig cfg;

  std::optional<Command> command = overrides.command;
  if (root.has("command")) {
    const std::string name = root.text("command");
    const auto parsed = parse_command(name);
    if (!parsed) fail("command", "unknown command \"" + name + "\"");
    if (!command) command = parsed;
  }
  if (!command) fail("command", "missing required key");
  cfg.command = *command;

  if (root.has("seed")) cfg.seed = root.unsigned_integer("seed", 0);
  if (overrides.seed) cfg.seed = overrides.seed;
  cfg.workers = static_cast<unsigned>(root.unsigned_integer("workers", 1));
  if (overrides.workers) cfg.workers = *overrides.workers;
  if (cfg.workers == 0) fail("workers", "must be at least 1");

  if (auto p = root.sub("params")) {
    cfg.params = parse_params(*p);
    p->finish();
  } else if (cfg.command != Command::Sweep) {
    fail("params", "missing required key");
  }

  if (auto s = root.sub("integrator")) parse_integrator(*s, cfg.integrator);

  if (auto s = root.sub("lattice")) {
    cfg.eta_min = s->optional_number("eta_min");
    cfg.eta_max = s->optional_number("eta_max");
    s->finish();
    if (cfg.eta_min && cfg.eta_max && !(*cfg.eta_min <= *cfg.eta_max)) {
      fail("lattice.eta_max", "must be >= eta_min");
    }
  }

  if (auto s = root.sub("init")) {
    cfg.init = parse_init(*s, cfg.seed);
  }

  if (auto s = root.sub("simulate")) {
    cfg.simulate.tau_end = s->number("tau_end", cfg.simulate.tau_end);
    cfg.simulate.sample_every = s->number("sample_every", cfg.simulate.sample_every);
    s->finish();
  }
  if (!(cfg.simulate.sample_every > 0.0)) fail("simulate.sample_every", "must be positive");

  if (auto s = root.sub("lyapunov")) {
    auto& l = cfg.lyapunov;
    l.tau_end = s->number("tau_end", l.tau_end);
    l.sample_every = s->number("sample_every", l.sample_every);
    l.C1 = s->optional_number("C1");
    l.C2 = s->optional_number("C2");
    l.order = static_cast<int>(s->unsigned_integer("order", static_cast<std::uint64_t>(l.order)));
    l.tol_rel = s->number("tol_rel", l.tol_rel);
    s->finish();
  }
  if (!(cfg.lyapunov.sample_every > 0.0)) fail("lyapunov.sample_every", "must be positive");
  if (cfg.lyapunov.order > 60) fail("lyapunov.order", "must be <= 60");
  if (cfg.params && !cfg.lyapunov.C1) cfg.lyapunov.C1 = 4.0 / cfg.params->k();
  if (cfg.params && !cfg.lyapunov.C2) cfg.lyapunov.C2 = 1.0 / cfg.params->k();

  if (auto s = root.sub("pathsum")) {
    auto& p = cfg.pathsum;
    p.t0 = s->number("t0", p.t0);
    p.t1 = s->number("t1", p.t1);
    p.J = s->unsigned_integer("J", p.J);
    s->finish();
  }
  if (!(cfg.pathsum.t1 >= cfg.pathsum.t0)) fail("pathsum.t1", "must be >= t0");

  if (auto s = root.sub("cascade")) {
    cfg.cascade.J = s->unsigned_integer("J", cfg.cascade.J);
    cfg.cascade.min_ratio = s->number("min_ratio", cfg.cascade.min_ratio);
    s->finish();
  }
  if (cfg.cascade.J < 1) fail("cascade.J", "must be at least 1");

  if (auto s = root.sub("sweep")) {
    cfg.sweep.c = s->number_list("c");
    cfg.sweep.L = s->number_list("L");
    cfg.sweep.J = s->unsigned_integer("J", cfg.sweep.J);
    cfg.sweep.stable_envelope = s->number("stable_envelope", cfg.sweep.stable_envelope);
    s->finish();
  } else if (cfg.command == Command::Sweep) {
    fail("sweep", "missing required key");
  }
  if (cfg.command == Command::Sweep && (cfg.sweep.c.empty() || cfg.sweep.L.empty())) {
    fail("sweep.c", "grid must be non-empty");
  }
  if (cfg.sweep.J < 1) fail("sweep.J", "must be at least 1");

  root.finish();
  return cfg;
}

std::string RunConfig::echo() const {
  json j;
  j["command"] = std::string(to_string(command));
  if (params) {
    j["params"] = {{"c", params->c()},
                   {"k", params->k()},
                   {"L", params->L()},
                   {"eta_star", params->eta_star()}};
  }
  const auto& w = integrator.window;
  j["integrator"] = {{"rel_tol", integrator.rel_tol},
                     {"abs_tol", integrator.abs_tol},
                     {"max_step", integrator.max_step},
                     {"resonance_cap_factor", integrator.resonance_cap_factor},
                     {"resonance_zone_factor", integrator.resonance_zone_factor},
                     {"max_steps", integrator.max_steps},
                     {"window",
                      {{"initial_radius", w.initial_radius},
                       {"growth_margin", w.growth_margin},
                       {"edge_tol", w.edge_tol},
                       {"max_modes", w.max_modes},
                       {"extend", w.extend}}}};
  json lattice = json::object();
  if (eta_min) lattice["eta_min"] = *eta_min;
  if (eta_max) lattice["eta_max"] = *eta_max;
  j["lattice"] = lattice;
  j["init"] = init_to_json(init);
  if (seed) j["seed"] = *seed;
  j["workers"] = workers;
  j["simulate"] = {{"tau_end", simulate.tau_end}, {"sample_every", simulate.sample_every}};
  json lyap = {{"tau_end", lyapunov.tau_end},
               {"sample_every", lyapunov.sample_every},
               {"order", lyapunov.order},
               {"tol_rel", lyapunov.tol_rel}};
  if (lyapunov.C1) lyap["C1"] = *lyapunov.C1;
  if (lyapunov.C2) lyap["C2"] = *lyapunov.C2;
  j["lyapunov"] = lyap;
  j["pathsum"] = {{"t0", pathsum.t0}, {"t1", pathsum.t1}, {"J", pathsum.J}};
  j["cascade"] = {{"J", cascade.J}, {"min_ratio", cascade.min_ratio}};
  j["sweep"] = {{"c", sweep.c},
                {"L", sweep.L},
                {"J", sweep.J},
                {"stable_envelope", sweep.stable_envelope}};
  return j.dump(2);
}

}  // namespace shearlab
