#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "scole/errors.hpp"

namespace scole::cli {
namespace {

// Line numbers of the keys seen so far; 0 when a field kept its default.
using LineMap = std::map<std::string, int>;

class Diagnostics {
 public:
  Diagnostics(std::string source, const LineMap* lines) : source_(std::move(source)), lines_(lines) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    std::ostringstream os;
    os << source_;
    if (lines_ != nullptr) {
      auto it = lines_->find(key);
      if (it != lines_->end() && it->second > 0) os << ':' << it->second;
    }
    os << ": " << key << ": " << message;
    throw ValidationError(os.str());
  }

 private:
  std::string source_;
  const LineMap* lines_;
};

std::string show(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require(const Diagnostics& diag, const std::string& key, double v, bool ok,
             const char* rule) {
  if (!std::isfinite(v) || !ok) diag.fail(key, std::string("must be ") + rule + " (got " + show(v) + ")");
}

void positive(const Diagnostics& d, const std::string& key, double v) { require(d, key, v, v > 0.0, "> 0"); }
void nonnegative(const Diagnostics& d, const std::string& key, double v) {
  require(d, key, v, v >= 0.0, ">= 0");
}

void cross_check(const RunConfig& c, const Diagnostics& d) {
  const ModelSpec& m = c.model;
  require(d, "n_elements", m.n_elements, m.n_elements >= 1 && m.n_elements <= 1024, "in [1, 1024]");
  nonnegative(d, "a", m.a);
  nonnegative(d, "b", m.b);
  positive(d, "m", m.beam.m);
  positive(d, "J", m.beam.J);
  positive(d, "m1", m.tmd.m1);
  positive(d, "k1", m.tmd.k1);
  nonnegative(d, "d1", m.tmd.d1);
  positive(d, "Dp", m.hyd.Dp);
  positive(d, "Dm", m.hyd.Dm);
  nonnegative(d, "Bp", m.hyd.Bp);
  nonnegative(d, "Bm", m.hyd.Bm);
  nonnegative(d, "kleak_p", m.hyd.kleak_p);
  nonnegative(d, "kleak_m", m.hyd.kleak_m);
  positive(d, "beta", m.hyd.beta);
  positive(d, "V", m.hyd.V);
  positive(d, "JT", m.hyd.JT);
  positive(d, "JG", m.hyd.JG);
  nonnegative(d, "k_fb", m.k_fb);

  if (c.spacing == Spacing::log) {
    require(d, "s_lo", c.s_lo, c.s_lo > 0.0, "> 0 for log spacing");
  } else {
    nonnegative(d, "s_lo", c.s_lo);
  }
  if (c.s_hi > 0.0) require(d, "s_hi", c.s_hi, c.s_hi > c.s_lo, "> s_lo (or 0 for automatic)");
  require(d, "n_points", c.n_points, c.n_points >= 2, ">= 2");
  nonnegative(d, "fit_lo", c.fit_lo);
  nonnegative(d, "fit_hi", c.fit_hi);
  if (c.fit_lo > 0.0 && c.fit_hi > 0.0) require(d, "fit_hi", c.fit_hi, c.fit_hi > c.fit_lo, "> fit_lo");
  positive(d, "alpha_max", c.alpha_max);
  positive(d, "band_lo", c.band_lo);
  require(d, "band_fraction", c.band_fraction, c.band_fraction > 0.0 && c.band_fraction <= 1.0,
          "in (0, 1]");

  positive(d, "T", c.T);
  nonnegative(d, "dt", c.dt);
  if (c.dt > 0.0) require(d, "dt", c.dt, c.dt <= c.T, "<= T");
  require(d, "k_modes", c.k_modes, c.k_modes >= 1, ">= 1");
  if (c.profile == InitialProfile::smooth_modal) {
    require(d, "k_modes", c.k_modes, c.k_modes <= 2 * m.n_elements,
            "<= 2 * n_elements (the number of beam modes)");
  }
  require(d, "magnitude", c.magnitude, c.magnitude != 0.0, "nonzero");
  require(d, "record_every", c.record_every, c.record_every >= 0, ">= 0");
  nonnegative(d, "decay_lo", c.decay_lo);
  require(d, "decay_hi", c.decay_hi, c.decay_hi > c.decay_lo && c.decay_hi <= c.T,
          "> decay_lo and <= T");
  require(d, "dissipation_steps", static_cast<double>(c.dissipation_steps), c.dissipation_steps >= 1,
          ">= 1");
  positive(d, "dissipation_dt", c.dissipation_dt);

  positive(d, "epsilon", c.epsilon);
  positive(d, "delta", c.delta);
  require(d, "k_max", c.k_max, c.k_max >= 1, ">= 1");

  require(d, "passivity_systems", c.passivity_systems, c.passivity_systems >= 0, ">= 0");
  require(d, "passivity_samples", c.passivity_samples, c.passivity_samples >= 1, ">= 1");
  positive(d, "coupling_gain", c.coupling_gain);
  require(d, "coupling_points", c.coupling_points, c.coupling_points >= 2, ">= 2");
  require(d, "threads", c.threads, c.threads >= 1, ">= 1");

  if (c.model.kind == ModelKind::hydraulic_feedback) {
    // The feedback loop closes the load port; without slip it cannot damp the drivetrain.
    if (!m.hyd.damped()) d.fail("Bp", "Bp + Bm must be > 0 for the feedback model");
  }
}

template <class T>
T scalar_as(const YAML::Node& node, const std::string& key, const Diagnostics& diag) {
  if (!node.IsScalar()) diag.fail(key, "expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    diag.fail(key, "cannot read '" + node.Scalar() + "' as a " +
                       (std::is_same_v<T, bool> ? "boolean" : "number"));
  }
}

CoefficientSpec parse_coefficient(const YAML::Node& node, const std::string& key,
                                  const Diagnostics& diag, const std::filesystem::path& base) {
  CoefficientSpec c;
  if (node.IsScalar()) {
    c.kind = "constant";
    c.c0 = scalar_as<double>(node, key, diag);
    c.c1 = 0.0;
    return c;
  }
  if (!node.IsMap()) diag.fail(key, "expected a number or a mapping with 'type'");
  const YAML::Node type = node["type"];
  if (!type) diag.fail(key, "missing 'type' (constant, affine, exp or table)");
  c.kind = type.as<std::string>();
  for (const auto& kv : node) {
    const std::string sub = kv.first.as<std::string>();
    if (sub == "type") continue;
    if (sub == "c0") {
      c.c0 = scalar_as<double>(kv.second, key + ".c0", diag);
    } else if (sub == "c1") {
      c.c1 = scalar_as<double>(kv.second, key + ".c1", diag);
    } else if (sub == "value") {
      c.c0 = scalar_as<double>(kv.second, key + ".value", diag);
    } else if (sub == "file") {
      std::filesystem::path p = kv.second.as<std::string>();
      c.table = p.is_absolute() ? p : base / p;
    } else {
      diag.fail(key, "unknown field '" + sub + "'");
    }
  }
  if (c.kind == "constant") {
    c.c1 = 0.0;
  } else if (c.kind == "table") {
    if (c.table.empty()) diag.fail(key, "table coefficient needs 'file'");
  } else if (c.kind != "affine" && c.kind != "exp") {
    diag.fail(key, "unknown type '" + c.kind + "' (constant, affine, exp or table)");
  }
  return c;
}

InitialProfile profile_from_string(const std::string& s, const Diagnostics& diag) {
  if (s == "smooth_modal") return InitialProfile::smooth_modal;
  if (s == "tip_kick") return InitialProfile::tip_kick;
  if (s == "static_bend") return InitialProfile::static_bend;
  diag.fail("profile", "unknown profile '" + s + "' (smooth_modal, tip_kick, static_bend)");
}

}  // namespace

CoefficientFn CoefficientSpec::build(int n_elements) const {
  if (kind == "constant") return constant_coefficient(c0);
  if (kind == "affine") return affine_coefficient(c0, c1);
  if (kind == "exp") return exp_coefficient(c0, c1);
  if (kind == "table") {
    CoefficientTable t = read_coefficient_csv(table);
    const std::size_t needed = 4 * static_cast<std::size_t>(n_elements);
    if (t.x.size() < needed) {
      throw ValidationError(table.string() + ": " + std::to_string(t.x.size()) +
                            " samples, need at least 4 * n_elements = " + std::to_string(needed));
    }
    return tabulated_coefficient(std::move(t));
  }
  throw ValidationError("unknown coefficient type '" + kind + "'");
}

std::string CoefficientSpec::describe() const {
  if (kind == "table") return "table:" + table.generic_string();
  std::ostringstream os;
  os.precision(17);
  if (kind == "constant") {
    os << "constant(" << c0 << ")";
  } else {
    os << kind << "(" << c0 << ", " << c1 << ")";
  }
  return os.str();
}

void RunConfig::validate() const { cross_check(*this, Diagnostics("config", nullptr)); }

RunConfig parse_config(const std::string& text, const std::string& source,
                       const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ':' << e.mark.line + 1 << ": syntax error: " << e.msg;
    throw ValidationError(os.str());
  }

  RunConfig cfg;
  LineMap lines;
  const Diagnostics diag(source, &lines);
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  if (!root.IsMap()) throw ValidationError(source + ": expected a mapping of key: value pairs");

  auto num = [&](double& field) {
    return [&field, &diag](const YAML::Node& n, const std::string& k) {
      field = scalar_as<double>(n, k, diag);
    };
  };
  auto integer = [&](int& field) {
    return [&field, &diag](const YAML::Node& n, const std::string& k) {
      field = scalar_as<int>(n, k, diag);
    };
  };
  auto flag = [&](bool& field) {
    return [&field, &diag](const YAML::Node& n, const std::string& k) {
      field = scalar_as<bool>(n, k, diag);
    };
  };

  ModelSpec& m = cfg.model;
  using Handler = std::function<void(const YAML::Node&, const std::string&)>;
  const std::map<std::string, Handler> handlers = {
      {"model",
       [&](const YAML::Node& n, const std::string& k) {
         const auto name = scalar_as<std::string>(n, k, diag);
         try {
           m.kind = model_kind_from_string(name);
         } catch (const ValidationError&) {
           diag.fail(k, "unknown model '" + name +
                            "' (combined, torque, force, tmd, hydraulic, hydraulic_feedback)");
         }
       }},
      {"n_elements", integer(m.n_elements)},
      {"rho", [&](const YAML::Node& n, const std::string& k) { cfg.rho = parse_coefficient(n, k, diag, base_dir); }},
      {"EI", [&](const YAML::Node& n, const std::string& k) { cfg.EI = parse_coefficient(n, k, diag, base_dir); }},
      {"m", num(m.beam.m)},
      {"J", num(m.beam.J)},
      {"a", num(m.a)},
      {"b", num(m.b)},
      {"m1", num(m.tmd.m1)},
      {"k1", num(m.tmd.k1)},
      {"d1", num(m.tmd.d1)},
      {"Dp", num(m.hyd.Dp)},
      {"Dm", num(m.hyd.Dm)},
      {"Bp", num(m.hyd.Bp)},
      {"Bm", num(m.hyd.Bm)},
      {"kleak",
       [&](const YAML::Node& n, const std::string& k) {
         // A single leakage coefficient is booked on the pump side.
         m.hyd.kleak_p = scalar_as<double>(n, k, diag);
         m.hyd.kleak_m = 0.0;
       }},
      {"kleak_p", num(m.hyd.kleak_p)},
      {"kleak_m", num(m.hyd.kleak_m)},
      {"beta", num(m.hyd.beta)},
      {"V", num(m.hyd.V)},
      {"JT", num(m.hyd.JT)},
      {"JG", num(m.hyd.JG)},
      {"k_fb", num(m.k_fb)},
      {"s_lo", num(cfg.s_lo)},
      {"s_hi", num(cfg.s_hi)},
      {"n_points", integer(cfg.n_points)},
      {"spacing",
       [&](const YAML::Node& n, const std::string& k) {
         const auto v = scalar_as<std::string>(n, k, diag);
         if (v == "log") {
           cfg.spacing = Spacing::log;
         } else if (v == "linear") {
           cfg.spacing = Spacing::linear;
         } else {
           diag.fail(k, "unknown spacing '" + v + "' (log or linear)");
         }
       }},
      {"fit_lo", num(cfg.fit_lo)},
      {"fit_hi", num(cfg.fit_hi)},
      {"refine_resonances", flag(cfg.refine_resonances)},
      {"alpha_max", num(cfg.alpha_max)},
      {"band_lo", num(cfg.band_lo)},
      {"band_fraction", num(cfg.band_fraction)},
      {"T", num(cfg.T)},
      {"dt", num(cfg.dt)},
      {"profile",
       [&](const YAML::Node& n, const std::string& k) {
         cfg.profile = profile_from_string(scalar_as<std::string>(n, k, diag), diag);
       }},
      {"k_modes", integer(cfg.k_modes)},
      {"magnitude", num(cfg.magnitude)},
      {"record_every", integer(cfg.record_every)},
      {"decay_lo", num(cfg.decay_lo)},
      {"decay_hi", num(cfg.decay_hi)},
      {"dissipation_steps",
       [&](const YAML::Node& n, const std::string& k) { cfg.dissipation_steps = scalar_as<long>(n, k, diag); }},
      {"dissipation_dt", num(cfg.dissipation_dt)},
      {"zeta", [&](const YAML::Node& n, const std::string& k) { cfg.zeta = parse_coefficient(n, k, diag, base_dir); }},
      {"epsilon", num(cfg.epsilon)},
      {"delta", num(cfg.delta)},
      {"k_max", integer(cfg.k_max)},
      {"passivity_systems", integer(cfg.passivity_systems)},
      {"passivity_samples", integer(cfg.passivity_samples)},
      {"coupling_gain", num(cfg.coupling_gain)},
      {"coupling_points", integer(cfg.coupling_points)},
      {"check_passivity", flag(cfg.checks.passivity)},
      {"check_dissipation", flag(cfg.checks.dissipation)},
      {"check_conditions", flag(cfg.checks.conditions)},
      {"check_kernel", flag(cfg.checks.kernel)},
      {"check_routh_hurwitz", flag(cfg.checks.routh_hurwitz)},
      {"check_hydraulic_positivity", flag(cfg.checks.hydraulic_positivity)},
      {"check_coupling_bound", flag(cfg.checks.coupling_bound)},
      {"check_growth", flag(cfg.checks.growth)},
      {"check_spectrum", flag(cfg.checks.spectrum)},
      {"check_decay", flag(cfg.checks.decay)},
      {"seed",
       [&](const YAML::Node& n, const std::string& k) { cfg.seed = scalar_as<std::uint64_t>(n, k, diag); }},
      {"threads", integer(cfg.threads)},
      {"output",
       [&](const YAML::Node& n, const std::string& k) {
         std::filesystem::path p = scalar_as<std::string>(n, k, diag);
         cfg.output = p.is_absolute() ? p : base_dir / p;
       }},
  };

  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const int line = kv.first.Mark().line + 1;
    if (lines.count(key) != 0) {
      lines[key] = line;
      diag.fail(key, "duplicate key");
    }
    lines[key] = line;
    auto it = handlers.find(key);
    if (it == handlers.end()) diag.fail(key, "unknown key");
    it->second(kv.second, key);
  }

  cross_check(cfg, diag);

  // Coefficients are sampled now so that a bad table fails before any computation.
  try {
    m.beam.rho = cfg.rho.build(m.n_elements);
  } catch (const ValidationError& e) {
    diag.fail("rho", e.what());
  }
  try {
    m.beam.EI = cfg.EI.build(m.n_elements);
  } catch (const ValidationError& e) {
    diag.fail("EI", e.what());
  }
  try {
    m.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::string* raw_text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (raw_text != nullptr) *raw_text = text;
  return parse_config(text, path.string(), path.parent_path());
}

std::string default_config_yaml() {
  return R"(# Desk fixture: unit constants, 16 elements. Every key is optional.
model: combined
n_elements: 16
rho: 1
EI: 1
m: 1
J: 1
a: 1
b: 1
m1: 1
k1: 1
d1: 1
Dp: 1
Dm: 1
Bp: 1
Bm: 1
kleak: 0
beta: 1
V: 1
JT: 1
JG: 1
k_fb: 1
s_lo: 2
s_hi: 0            # 0: half the largest eigenfrequency
n_points: 200
spacing: log
refine_resonances: true
alpha_max: 2.4
T: 50
dt: 0              # 0: 1 / (4 s_mesh)
profile: smooth_modal
k_modes: 12
decay_lo: 5
decay_hi: 50
dissipation_steps: 10000
dissipation_dt: 0.001
zeta: {type: affine, c0: 0, c1: 2}
epsilon: 0.25
delta: 0.4
k_max: 20
seed: 0
threads: 1
output: scole_out
)";
}

}  // namespace scole::cli
