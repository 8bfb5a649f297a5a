#include "runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <random>

#include "scole/beam_fem.hpp"
#include "scole/errors.hpp"
#include "scole/models.hpp"
#include "scole/passive.hpp"
#include "scole/spectral.hpp"
#include "scole/timesim.hpp"

#ifndef SCOLE_VERSION
#define SCOLE_VERSION "unknown"
#endif

namespace scole::cli {
namespace {

constexpr std::array<std::string_view, 11> kSections = {
    "assembly",      "passivity",            "dissipation",    "conditions",
    "kernel",        "routh_hurwitz",        "hydraulic_positivity", "coupling_bound",
    "growth",        "spectrum",             "decay"};

constexpr double kDissipationTol = 1e-9;
constexpr double kKernelTol = 1e-8;
constexpr double kCouplingVariation = 0.2;

bool in_subcommand(Subcommand cmd, std::string_view section) {
  if (section == "assembly") return true;
  switch (cmd) {
    case Subcommand::assemble:
      return false;
    case Subcommand::check:
      return section != "growth" && section != "spectrum" && section != "decay";
    case Subcommand::scan:
      return section == "growth";
    case Subcommand::eigens:
      return section == "spectrum";
    case Subcommand::simulate:
      return section == "decay";
    case Subcommand::verify_all:
      return true;
  }
  return false;
}

bool enabled(const CheckToggles& t, std::string_view section) {
  if (section == "passivity") return t.passivity;
  if (section == "dissipation") return t.dissipation;
  if (section == "conditions") return t.conditions;
  if (section == "kernel") return t.kernel;
  if (section == "routh_hurwitz") return t.routh_hurwitz;
  if (section == "hydraulic_positivity") return t.hydraulic_positivity;
  if (section == "coupling_bound") return t.coupling_bound;
  if (section == "growth") return t.growth;
  if (section == "spectrum") return t.spectrum;
  if (section == "decay") return t.decay;
  return true;
}

Json status_entry(std::string_view status, std::string_view reason) {
  Json j;
  j["status"] = status;
  j["reason"] = reason;
  return j;
}

const char* pass_fail(bool ok) { return ok ? "pass" : "fail"; }

bool is_hydraulic(ModelKind k) {
  return k == ModelKind::hydraulic || k == ModelKind::hydraulic_feedback;
}

Json complex_list(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

Json passivity_entry(const std::string& name, const PassivityReport& r) {
  Json j;
  j["block"] = name;
  j["passive"] = r.passive();
  j["min_defect"] = r.min_defect;
  j["certificate"] = r.certificate;
  j["certificate_tol"] = r.certificate_tol;
  j["samples"] = r.samples;
  return j;
}

std::string matrix_csv(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + "," + std::to_string(m.cols()) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, bool export_matrices)
      : cfg_(cfg), export_matrices_(export_matrices) {}

  Json run_section(std::string_view name);
  std::map<std::string, std::string>& artifacts() { return artifacts_; }

 private:
  const BeamMatrices& beam();
  const DiscreteGenerator& generator();
  const SpectrumReport& spectrum();

  Json assembly();
  Json passivity();
  Json dissipation();
  Json conditions();
  Json kernel();
  Json routh_hurwitz_section();
  Json hydraulic_positivity();
  Json coupling_bound();
  Json growth();
  Json spectrum_section();
  Json decay();

  const RunConfig& cfg_;
  bool export_matrices_;
  std::optional<BeamMatrices> beam_;
  std::optional<DiscreteGenerator> gen_;
  std::optional<SpectrumReport> spectrum_;
  std::map<std::string, std::string> artifacts_;
};

const BeamMatrices& Runner::beam() {
  if (!beam_) beam_ = build_beam_matrices(cfg_.model.beam, cfg_.model.n_elements);
  return *beam_;
}

const DiscreteGenerator& Runner::generator() {
  if (!gen_) gen_ = assemble_model(cfg_.model, beam());
  return *gen_;
}

const SpectrumReport& Runner::spectrum() {
  if (!spectrum_) spectrum_ = eigen_report(generator(), cfg_.band_lo, cfg_.band_fraction);
  return *spectrum_;
}

Json Runner::run_section(std::string_view name) {
  try {
    if (name == "assembly") return assembly();
    if (name == "passivity") return passivity();
    if (name == "dissipation") return dissipation();
    if (name == "conditions") return conditions();
    if (name == "kernel") return kernel();
    if (name == "routh_hurwitz") return routh_hurwitz_section();
    if (name == "hydraulic_positivity") return hydraulic_positivity();
    if (name == "coupling_bound") return coupling_bound();
    if (name == "growth") return growth();
    if (name == "spectrum") return spectrum_section();
    if (name == "decay") return decay();
    return status_entry("error", "unknown section");
  } catch (const ValidationError& e) {
    Json j = status_entry("error", e.what());
    j["error_kind"] = "validation";
    return j;
  } catch (const std::exception& e) {
    Json j = status_entry("error", e.what());
    j["error_kind"] = "numerical";
    return j;
  }
}

Json Runner::assembly() {
  const DiscreteGenerator& g = generator();
  const double scale = std::max(1.0, (g.gram * g.A).cwiseAbs().maxCoeff());
  const double d = g.dissipativity();
  Json j;
  j["status"] = pass_fail(d <= 1e-10 * scale);
  j["dim"] = g.dim();
  j["n_dof"] = g.n_dof;
  j["n_elements"] = g.n_elements;
  j["dissipativity"] = d;
  j["tolerance"] = 1e-10 * scale;
  j["channels"] = g.channel_names();
  if (export_matrices_) {
    artifacts_["A.csv"] = matrix_csv(g.A);
    artifacts_["gram.csv"] = matrix_csv(g.gram);
    std::string labels = "index,label\n";
    for (std::size_t i = 0; i < g.labels.size(); ++i) labels += std::to_string(i) + "," + g.labels[i] + "\n";
    artifacts_["labels.csv"] = labels;
  }
  return j;
}

Json Runner::passivity() {
  const BlockParameters block = cfg_.model.block();
  const ModelKind nacelle_kind =
      cfg_.model.kind == ModelKind::hydraulic_feedback ? ModelKind::hydraulic : cfg_.model.kind;
  const PassiveSystem beam_block = scole_block(beam(), cfg_.model.beam, nacelle_port(nacelle_kind));
  const PassiveSystem nacelle = nacelle_block(nacelle_kind, block);
  const double c = cfg_.coupling_gain;
  const PassiveSystem closed =
      feedback_transform(nacelle, c * Matrix::Identity(nacelle.input_dim(), nacelle.input_dim()), c);

  bool ok = true;
  Json blocks = Json::array();
  const std::pair<const char*, const PassiveSystem*> named[] = {
      {"beam", &beam_block}, {"nacelle", &nacelle}, {"nacelle_feedback", &closed}};
  std::uint64_t stream = cfg_.seed;
  for (const auto& [name, sys] : named) {
    const PassivityReport r = verify_passivity(*sys, cfg_.passivity_samples, stream++);
    ok = ok && r.passive();
    blocks.push_back(passivity_entry(name, r));
  }

  // Random passive systems and their feedback transforms.
  std::mt19937_64 rng(cfg_.seed);
  std::uniform_int_distribution<int> dim_n(1, 8);
  std::uniform_int_distribution<int> dim_p(1, 3);
  int failures = 0;
  int feedback_failures = 0;
  double worst_certificate = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg_.passivity_systems; ++i) {
    const int n = dim_n(rng);
    const int p = dim_p(rng);
    const PassiveSystem sys = random_passive_system(n, p, rng);
    const PassivityReport r = verify_passivity(sys, 16, cfg_.seed + 1000 + i);
    if (!r.passive()) ++failures;
    worst_certificate = std::max(worst_certificate, r.certificate);
    const PassiveSystem fb = feedback_transform(sys, c * Matrix::Identity(p, p), c);
    if (!verify_passivity(fb, 16, cfg_.seed + 5000 + i).passive()) ++feedback_failures;
  }
  ok = ok && failures == 0 && feedback_failures == 0;

  Json j;
  j["status"] = pass_fail(ok);
  j["blocks"] = blocks;
  Json random;
  random["systems"] = cfg_.passivity_systems;
  random["failures"] = failures;
  random["feedback_failures"] = feedback_failures;
  random["worst_certificate"] = cfg_.passivity_systems > 0 ? worst_certificate : 0.0;
  j["random"] = random;
  j["feedback_gain"] = c;
  return j;
}

Json Runner::dissipation() {
  const DiscreteGenerator& g = generator();
  const Vector z0 = classical_initial_data(g, cfg_.profile, cfg_.k_modes, cfg_.magnitude);
  const double dt = cfg_.dissipation_dt;
  const double T = static_cast<double>(cfg_.dissipation_steps) * dt;

  const EnergyTrajectory traj = simulate(g, z0, T, dt, 1);
  const DissipationCheck identity = verify_dissipation_identity(g, traj);

  DiscreteGenerator undamped = g;
  undamped.A = g.undamped();
  undamped.damping.clear();
  const EnergyTrajectory free = simulate(undamped, z0, T, dt, 1);
  const double e0 = free.energies.front();
  double drift = 0.0;
  for (double e : free.energies) drift = std::max(drift, std::abs(e - e0));
  const double drift_rel = e0 > 0.0 ? drift / e0 : drift;

  const bool ok = identity.relative <= kDissipationTol && drift_rel <= kDissipationTol && traj.monotone;
  Json j;
  j["status"] = pass_fail(ok);
  j["steps"] = traj.steps;
  j["dt"] = dt;
  j["E0"] = traj.energies.front();
  j["max_residual"] = identity.max_residual;
  j["relative_residual"] = identity.relative;
  j["worst_step"] = identity.worst_step;
  j["undamped_drift"] = drift_rel;
  j["monotone"] = traj.monotone;
  j["tolerance"] = kDissipationTol;
  return j;
}

Json Runner::conditions() {
  const int n = cfg_.model.n_elements;
  const int points = std::max(8, 8 * n + 1);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / (points - 1);
  const CoefficientFn zeta = cfg_.zeta.build(n);
  const Eq1Certificate cert = check_condition_eq1(cfg_.model.beam, zeta, cfg_.epsilon, cfg_.delta, grid);

  Json eq1;
  eq1["zeta"] = cfg_.zeta.describe();
  eq1["epsilon"] = cfg_.epsilon;
  eq1["delta"] = cfg_.delta;
  eq1["holds"] = cert.holds;
  eq1["margin"] = cert.margin;
  eq1["worst_x"] = cert.worst_x;
  eq1["worst_inequality"] = cert.worst_inequality;
  eq1["grid_points"] = points;

  Json cond;
  bool cond_ok = true;
  if (cfg_.rho.kind == "constant" && cfg_.EI.kind == "constant") {
    const std::vector<int> v =
        check_condition_cond(cfg_.model.beam.J, cfg_.EI.c0, cfg_.rho.c0, cfg_.k_max, 1e-9);
    cond_ok = v.empty();
    cond["status"] = pass_fail(cond_ok);
    cond["k_max"] = cfg_.k_max;
    cond["violations"] = v;
    cond["ratio"] = cfg_.model.beam.J * cfg_.EI.c0 / cfg_.rho.c0;
  } else {
    cond = status_entry("excluded", "non-resonance condition is stated for constant rho and EI");
  }

  Json j;
  j["status"] = pass_fail(cert.holds && cond_ok);
  j["eq1"] = eq1;
  j["non_resonance"] = cond;
  return j;
}

Json Runner::kernel() {
  const KernelReport k = kernel_check(generator(), kKernelTol);
  Json j;
  j["status"] = pass_fail(k.dimension == 0 && k.sigma_min > kKernelTol * k.sigma_max);
  j["dimension"] = k.dimension;
  j["sigma_min"] = k.sigma_min;
  j["sigma_max"] = k.sigma_max;
  j["tolerance"] = kKernelTol;
  return j;
}

Json Runner::routh_hurwitz_section() {
  if (!is_hydraulic(cfg_.model.kind)) {
    return status_entry("excluded", "applies to the hydraulic drivetrain cubic");
  }
  const HydraulicParameters& hyd = cfg_.model.hyd;
  const std::array<double, 4> c = hydraulic_characteristic(hyd);
  const bool rh = routh_hurwitz(c);
  const CVector roots = companion_roots(c);
  double max_re = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < roots.size(); ++i) max_re = std::max(max_re, roots(i).real());
  const bool agree = rh == (max_re < 0.0);
  Json j;
  j["status"] = pass_fail(agree && (rh || !hyd.damped()));
  j["coefficients"] = c;
  j["hurwitz"] = rh;
  j["companion_max_real"] = max_re;
  j["roots"] = complex_list(roots);
  j["agree"] = agree;
  return j;
}

Json Runner::hydraulic_positivity() {
  if (!is_hydraulic(cfg_.model.kind)) {
    return status_entry("excluded", "applies to the hydraulic models");
  }
  const HydraulicParameters& hyd = cfg_.model.hyd;
  if (!hyd.damped()) return status_entry("excluded", "needs Bp + Bm > 0");
  const std::vector<double> grid = frequency_grid(0.01, 100.0, 400, Spacing::log);
  const HydraulicPositivityReport r = hydraulic_positivity_check(hyd, grid);
  Json j;
  j["status"] = pass_fail(r.ok());
  j["a2"] = r.a2;
  j["a1"] = r.a1;
  j["a0"] = r.a0;
  j["discriminant"] = r.discriminant;
  j["a0_zero"] = r.a0_zero;
  j["a0_branch_ok"] = r.a0_branch_ok;
  j["implication_ok"] = r.implication_ok;
  j["violations"] = r.n_violations;
  j["worst_s"] = r.worst_s;
  j["hurwitz"] = r.hurwitz;
  j["companion_stable"] = r.companion_stable;
  return j;
}

Json Runner::coupling_bound() {
  const ModelKind kind = cfg_.model.kind;
  if (kind != ModelKind::tmd && kind != ModelKind::hydraulic) {
    return status_entry("excluded", "applies to the TMD and hydraulic couplings");
  }
  const PassiveSystem sys1 = scole_block(beam(), cfg_.model.beam, nacelle_port(kind));
  const PassiveSystem sys2 = nacelle_block(kind, cfg_.model.block());
  const double c = cfg_.coupling_gain;
  const Matrix K = c * Matrix::Identity(sys1.input_dim(), sys1.input_dim());
  const double lo = cfg_.band_lo;
  const double hi = cfg_.band_fraction * spectrum().s_mesh;
  if (!(hi > lo)) return status_entry("excluded", "reliable band is empty");

  // Both grids carry the coupled eigenfrequencies so that the resonance peaks,
  // where the ratio is largest, are sampled at any density.
  std::vector<double> peaks;
  for (const Complex& l : spectrum().eigenvalues) {
    if (l.imag() > lo && l.imag() < hi) peaks.push_back(l.imag());
  }
  auto with_peaks = [&](std::vector<double> grid) {
    grid.insert(grid.end(), peaks.begin(), peaks.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
  };
  const auto coarse = with_peaks(frequency_grid(lo, hi, cfg_.coupling_points, Spacing::log));
  const auto fine = with_peaks(frequency_grid(lo, hi, 2 * cfg_.coupling_points - 1, Spacing::log));
  const CouplingBoundReport r1 = check_coupled_resolvent_bound(sys1, sys2, K, c, coarse);
  const CouplingBoundReport r2 = check_coupled_resolvent_bound(sys1, sys2, K, c, fine);
  const double variation =
      r1.max_ratio > 0.0 ? std::abs(r2.max_ratio - r1.max_ratio) / r1.max_ratio
                         : std::numeric_limits<double>::infinity();
  const bool ok = std::isfinite(r1.max_ratio) && r1.max_ratio > 0.0 && std::isfinite(r2.max_ratio) &&
                  variation < kCouplingVariation;
  Json j;
  j["status"] = pass_fail(ok);
  j["band"] = Json::array({lo, hi});
  j["feedback_gain"] = c;
  j["max_ratio"] = r1.max_ratio;
  j["max_ratio_doubled"] = r2.max_ratio;
  j["variation"] = variation;
  j["points"] = r1.points.size();
  j["excluded"] = r1.excluded;
  j["excluded_doubled"] = r2.excluded.size();
  return j;
}

Json Runner::growth() {
  const DiscreteGenerator& g = generator();
  const SpectrumReport& spec = spectrum();
  ScanOptions opts;
  opts.s_lo = cfg_.s_lo;
  opts.s_hi = cfg_.s_hi > 0.0 ? cfg_.s_hi : 0.5 * spec.s_mesh;
  if (!(opts.s_hi > opts.s_lo)) {
    throw ValidationError("scan range is empty: s_hi = " + format_number(opts.s_hi) +
                          " <= s_lo = " + format_number(opts.s_lo));
  }
  opts.n_points = cfg_.n_points;
  opts.spacing = cfg_.spacing;
  opts.fit_lo = cfg_.fit_lo;
  opts.fit_hi = cfg_.fit_hi;
  opts.refine_resonances = cfg_.refine_resonances;
  opts.threads = cfg_.threads;
  const ResolventScan scan = scan_resolvent(g, opts);

  CsvTable csv({"s", "resolvent_norm"});
  double max_norm = 0.0;
  for (std::size_t i = 0; i < scan.s_values.size(); ++i) {
    csv.add_row({scan.s_values[i], scan.norms[i]});
    max_norm = std::max(max_norm, scan.norms[i]);
  }
  artifacts_["scan.csv"] = csv.str();

  Json j;
  j["status"] = pass_fail(scan.excluded.empty() && scan.alpha_fit <= cfg_.alpha_max);
  j["alpha_fit"] = scan.alpha_fit;
  j["alpha_raw"] = scan.alpha_raw;
  j["alpha_max"] = cfg_.alpha_max;
  j["window"] = Json::array({scan.window_lo, scan.window_hi});
  j["envelope_points"] = scan.envelope_points;
  j["samples"] = scan.s_values.size();
  j["excluded_points"] = scan.excluded;
  j["max_real_part"] = spec.max_real_part;
  j["asymptotic_slope"] = spec.asymptotic_slope;
  j["sigma_min"] = max_norm > 0.0 ? 1.0 / max_norm : 0.0;
  return j;
}

Json Runner::spectrum_section() {
  const SpectrumReport& spec = spectrum();
  CsvTable csv({"re", "im"});
  for (const Complex& l : spec.eigenvalues) csv.add_row({l.real(), l.imag()});
  artifacts_["spectrum.csv"] = csv.str();

  Json j;
  j["status"] = pass_fail(spec.max_real_part < 0.0 && spec.conjugate_paired);
  j["max_real_part"] = spec.max_real_part;
  j["s_mesh"] = spec.s_mesh;
  j["conjugate_paired"] = spec.conjugate_paired;
  j["band"] = Json::array({spec.band_lo, spec.band_hi});
  j["band_count"] = spec.band_count;
  j["asymptotic_slope"] = spec.asymptotic_slope;
  j["eigenvalues"] = spec.eigenvalues.size();
  return j;
}

Json Runner::decay() {
  const DiscreteGenerator& g = generator();
  const double dt = cfg_.dt > 0.0 ? cfg_.dt : 1.0 / (4.0 * spectrum().s_mesh);
  const long steps = std::lround(std::ceil(cfg_.T / dt - 1e-9));
  const int every =
      cfg_.record_every > 0 ? cfg_.record_every : static_cast<int>(std::max(1L, steps / 5000));
  const Vector z0 = classical_initial_data(g, cfg_.profile, cfg_.k_modes, cfg_.magnitude);
  const EnergyTrajectory traj = simulate(g, z0, cfg_.T, dt, every);
  const DecayFit fit = fit_decay_rate(traj, cfg_.decay_lo, cfg_.decay_hi);

  std::vector<std::string> header{"t", "E"};
  for (const auto& name : traj.channel_names) header.push_back(name);
  CsvTable csv(header);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i], traj.energies[i]};
    row.insert(row.end(), traj.channels[i].begin(), traj.channels[i].end());
    csv.add_row(row);
  }
  artifacts_["trajectory.csv"] = csv.str();

  Json j;
  j["status"] = pass_fail(traj.monotone && std::isfinite(fit.slope) && fit.slope < 0.0);
  j["slope"] = fit.slope;
  j["window"] = Json::array({cfg_.decay_lo, cfg_.decay_hi});
  j["intercept"] = fit.intercept;
  j["fit_points"] = fit.count;
  j["curvature"] = fit.curvature;
  j["power_law"] = fit.power_law;
  if (every == 1) {
    j["max_dissipation_residual"] = verify_dissipation_identity(g, traj).max_residual;
  } else {
    j["max_dissipation_residual"] = nullptr;
  }
  j["monotone"] = traj.monotone;
  j["max_relative_increase"] = traj.max_relative_increase;
  j["E0"] = traj.energies.front();
  j["E_final"] = traj.energies.back();
  j["dt"] = dt;
  j["steps"] = traj.steps;
  j["record_every"] = every;
  return j;
}

Json model_entry(const RunConfig& cfg) {
  const ModelSpec& m = cfg.model;
  Json j;
  j["kind"] = to_string(m.kind);
  j["n_elements"] = m.n_elements;
  j["rho"] = cfg.rho.describe();
  j["EI"] = cfg.EI.describe();
  j["m"] = m.beam.m;
  j["J"] = m.beam.J;
  switch (m.kind) {
    case ModelKind::combined:
      j["a"] = m.a;
      j["b"] = m.b;
      break;
    case ModelKind::torque:
      j["b"] = m.b;
      break;
    case ModelKind::force:
      j["a"] = m.a;
      break;
    case ModelKind::tmd:
      j["m1"] = m.tmd.m1;
      j["k1"] = m.tmd.k1;
      j["d1"] = m.tmd.d1;
      break;
    case ModelKind::hydraulic:
    case ModelKind::hydraulic_feedback:
      j["Dp"] = m.hyd.Dp;
      j["Dm"] = m.hyd.Dm;
      j["Bp"] = m.hyd.Bp;
      j["Bm"] = m.hyd.Bm;
      j["kleak_p"] = m.hyd.kleak_p;
      j["kleak_m"] = m.hyd.kleak_m;
      j["beta"] = m.hyd.beta;
      j["V"] = m.hyd.V;
      j["JT"] = m.hyd.JT;
      j["JG"] = m.hyd.JG;
      if (m.kind == ModelKind::hydraulic_feedback) j["k_fb"] = m.k_fb;
      break;
  }
  return j;
}

}  // namespace

std::string_view to_string(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::assemble: return "assemble";
    case Subcommand::check: return "check";
    case Subcommand::scan: return "scan";
    case Subcommand::eigens: return "eigens";
    case Subcommand::simulate: return "simulate";
    case Subcommand::verify_all: return "verify-all";
  }
  return "unknown";
}

RunOutcome run(Subcommand cmd, const RunConfig& cfg, const std::string& config_text) {
  cfg.validate();
  Runner runner(cfg, cmd == Subcommand::assemble);
  RunOutcome out;

  Json sections;
  bool failed = false;
  bool numerical = false;
  bool validation = false;
  for (std::string_view name : kSections) {
    Json entry;
    if (!in_subcommand(cmd, name)) {
      entry = status_entry("not run", "not part of " + std::string(to_string(cmd)));
    } else if (!enabled(cfg.checks, name)) {
      entry = status_entry("not run", "disabled in config");
    } else {
      entry = runner.run_section(name);
    }
    const std::string status = entry["status"].get<std::string>();
    if (status == "fail") failed = true;
    if (status == "error") {
      if (entry.value("error_kind", "") == "validation") {
        validation = true;
      } else {
        numerical = true;
      }
    }
    sections[std::string(name)] = entry;
  }

  out.exit_code = validation ? exit_validation
                  : numerical ? exit_numerical
                  : failed    ? exit_check_failed
                              : exit_pass;
  Json report;
  report["toolkit"] = "scole";
  report["version"] = SCOLE_VERSION;
  report["subcommand"] = to_string(cmd);
  report["config_hash"] = fnv1a_hex(config_text);
  report["seed"] = cfg.seed;
  report["status"] = out.exit_code == exit_pass          ? "pass"
                     : out.exit_code == exit_check_failed ? "fail"
                                                          : "error";
  report["exit_code"] = out.exit_code;
  report["model"] = model_entry(cfg);
  report["sections"] = sections;

  out.artifacts = std::move(runner.artifacts());
  out.report = report;
  out.artifacts["report.json"] = dump_json(report);
  return out;
}

void emit_report(const RunOutcome& outcome, const std::filesystem::path& dir) {
  for (const auto& [name, text] : outcome.artifacts) write_text(dir, name, text);
}

}  // namespace scole::cli
