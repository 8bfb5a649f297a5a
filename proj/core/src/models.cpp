#include "scole/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "scole/errors.hpp"

namespace scole {

namespace {

void require_positive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << name << " must be > 0 (got " << v << ")";
    throw ValidationError(os.str());
  }
}

void require_nonnegative(const char* name, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << name << " must be >= 0 (got " << v << ")";
    throw ValidationError(os.str());
  }
}

// Undamped beam part laid out as (q, v, extra...). Also returns the full mass
// factorization so callers can map tip forces into velocity rows.
struct BeamScaffold {
  DiscreteGenerator gen;
  Eigen::LLT<Matrix> mass;
  int n = 0;  // kinematic dofs
  int vt = 0; // index of w_t(1)
  int vr = 0; // index of w_xt(1)

  // Mfull^{-1} e_i as a column.
  Vector inverse_mass_column(int dof) const { return mass.solve(Vector::Unit(n, dof)); }
};

BeamScaffold beam_scaffold(const BeamMatrices& beam, const BeamParameters& params, int extra) {
  params.validate();
  const int n = beam.n_dof;
  BeamScaffold sc;
  sc.n = n;
  const Matrix mfull = beam.full_mass(params.m, params.J);
  sc.mass.compute(mfull);
  if (sc.mass.info() != Eigen::Success) throw NumericalError("full mass matrix is not positive definite");

  const int dim = 2 * n + extra;
  DiscreteGenerator& g = sc.gen;
  g.A = Matrix::Zero(dim, dim);
  g.A.block(0, n, n, n).setIdentity();
  g.A.block(n, 0, n, n) = -sc.mass.solve(beam.K);
  g.gram = Matrix::Zero(dim, dim);
  g.gram.topLeftCorner(n, n) = beam.K;
  g.gram.block(n, n, n, n) = mfull;
  g.labels = beam_labels(beam.n_elements);
  g.labels.resize(dim);
  g.n_dof = n;
  g.n_elements = beam.n_elements;
  g.tip_disp_index = beam.tip_disp_index;
  g.tip_rot_index = beam.tip_rot_index;
  sc.vt = n + beam.tip_disp_index;
  sc.vr = n + beam.tip_rot_index;
  return sc;
}

DampingTerm term(const char* channel, double gain, int dim,
                 std::initializer_list<std::pair<int, double>> entries) {
  DampingTerm t;
  t.channel = channel;
  t.gain = gain;
  t.direction = Vector::Zero(dim);
  for (const auto& [i, v] : entries) t.direction(i) += v;
  return t;
}

SpectrumHit denominator_hit(double s, const char* what) {
  std::ostringstream os;
  os.precision(17);
  os << what << " closed form: denominator vanishes at s = " << s;
  return SpectrumHit(s, os.str());
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::combined: return "combined";
    case ModelKind::torque: return "torque";
    case ModelKind::force: return "force";
    case ModelKind::tmd: return "tmd";
    case ModelKind::hydraulic: return "hydraulic";
    case ModelKind::hydraulic_feedback: return "hydraulic_feedback";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (ModelKind k : {ModelKind::combined, ModelKind::torque, ModelKind::force, ModelKind::tmd,
                      ModelKind::hydraulic, ModelKind::hydraulic_feedback}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown model '" + std::string(name) +
                        "' (expected combined, torque, force, tmd, hydraulic or hydraulic_feedback)");
}

void TmdParameters::validate() const {
  require_positive("m1", m1);
  require_positive("k1", k1);
  require_positive("d1", d1);
}

void HydraulicParameters::validate() const {
  require_positive("Dp", Dp);
  require_positive("Dm", Dm);
  require_nonnegative("Bp", Bp);
  require_nonnegative("Bm", Bm);
  require_nonnegative("kleak_p", kleak_p);
  require_nonnegative("kleak_m", kleak_m);
  require_positive("beta", beta);
  require_positive("V", V);
  require_positive("JT", JT);
  require_positive("JG", JG);
}

DiscreteGenerator assemble_combined(const BeamMatrices& beam, const BeamParameters& params,
                                    double a, double b) {
  require_nonnegative("a", a);
  require_nonnegative("b", b);
  BeamScaffold sc = beam_scaffold(beam, params, 0);
  DiscreteGenerator& g = sc.gen;
  g.model = "combined";
  g.A.col(sc.vt).segment(sc.n, sc.n) -= a * sc.inverse_mass_column(beam.tip_disp_index);
  g.A.col(sc.vr).segment(sc.n, sc.n) -= b * sc.inverse_mass_column(beam.tip_rot_index);
  const int dim = g.dim();
  g.damping.push_back(term("tip_velocity", a, dim, {{sc.vt, 1.0}}));
  g.damping.push_back(term("tip_angular_velocity", b, dim, {{sc.vr, 1.0}}));
  return std::move(g);
}

DiscreteGenerator assemble_torque(const BeamMatrices& beam, const BeamParameters& params, double b) {
  DiscreteGenerator g = assemble_combined(beam, params, 0.0, b);
  g.model = "torque";
  g.damping.erase(g.damping.begin());
  return g;
}

DiscreteGenerator assemble_force(const BeamMatrices& beam, const BeamParameters& params, double a) {
  DiscreteGenerator g = assemble_combined(beam, params, a, 0.0);
  g.model = "force";
  g.damping.pop_back();
  return g;
}

DiscreteGenerator assemble_tmd(const BeamMatrices& beam, const BeamParameters& params,
                               const TmdParameters& tmd) {
  tmd.validate();
  BeamScaffold sc = beam_scaffold(beam, params, 2);
  DiscreteGenerator& g = sc.gen;
  g.model = "tmd";
  const int f5 = 2 * sc.n;
  const int f6 = f5 + 1;
  g.labels[f5] = "p-w(1)";
  g.labels[f6] = "p_t";
  g.gram(f5, f5) = tmd.k1;
  g.gram(f6, f6) = tmd.m1;

  // Tip force -d1 v_tip + k1 f5 + d1 f6 on the tip displacement row.
  const Vector mt = sc.inverse_mass_column(beam.tip_disp_index);
  g.A.col(sc.vt).segment(sc.n, sc.n) -= tmd.d1 * mt;
  g.A.col(f5).segment(sc.n, sc.n) += tmd.k1 * mt;
  g.A.col(f6).segment(sc.n, sc.n) += tmd.d1 * mt;

  g.A(f5, sc.vt) = -1.0;
  g.A(f5, f6) = 1.0;
  g.A(f6, sc.vt) = tmd.d1 / tmd.m1;
  g.A(f6, f5) = -tmd.k1 / tmd.m1;
  g.A(f6, f6) = -tmd.d1 / tmd.m1;

  g.damping.push_back(term("tmd_relative_velocity", tmd.d1, g.dim(), {{f6, 1.0}, {sc.vt, -1.0}}));
  return std::move(g);
}

DiscreteGenerator assemble_hydraulic(const BeamMatrices& beam, const BeamParameters& params,
                                     const HydraulicParameters& hyd) {
  hyd.validate();
  BeamScaffold sc = beam_scaffold(beam, params, 3);
  DiscreteGenerator& g = sc.gen;
  g.model = "hydraulic";
  const int f5 = 2 * sc.n;
  const int f6 = f5 + 1;
  const int f7 = f5 + 2;
  const int vr = sc.vr;
  g.labels[f5] = "Omega_p+w_xt(1)";
  g.labels[f6] = "Omega_m-w_xt(1)";
  g.labels[f7] = "P";
  g.gram(f5, f5) = hyd.JT;
  g.gram(f6, f6) = hyd.JG;
  g.gram(f7, f7) = hyd.V / hyd.beta;

  const double Bp = hyd.Bp, Bm = hyd.Bm, Dp = hyd.Dp, Dm = hyd.Dm, k = hyd.kleak();
  const double bv = hyd.beta / hyd.V;

  // Nacelle torque Bp f5 - (Bp + Bm) w_xt(1) - Bm f6 + (Dp + Dm) P.
  const Vector mr = sc.inverse_mass_column(beam.tip_rot_index);
  g.A.col(vr).segment(sc.n, sc.n) -= (Bp + Bm) * mr;
  g.A.col(f5).segment(sc.n, sc.n) += Bp * mr;
  g.A.col(f6).segment(sc.n, sc.n) -= Bm * mr;
  g.A.col(f7).segment(sc.n, sc.n) += (Dp + Dm) * mr;

  g.A(f5, f5) = -Bp / hyd.JT;
  g.A(f5, vr) = Bp / hyd.JT;
  g.A(f5, f7) = -Dp / hyd.JT;

  g.A(f6, f6) = -Bm / hyd.JG;
  g.A(f6, vr) = -Bm / hyd.JG;
  g.A(f6, f7) = Dm / hyd.JG;

  g.A(f7, f5) = bv * Dp;
  g.A(f7, vr) = -bv * (Dp + Dm);
  g.A(f7, f6) = -bv * Dm;
  g.A(f7, f7) = -bv * k;

  const int dim = g.dim();
  g.damping.push_back(term("pump_slip", Bp, dim, {{f5, 1.0}, {vr, -1.0}}));
  g.damping.push_back(term("motor_slip", Bm, dim, {{f6, 1.0}, {vr, 1.0}}));
  g.damping.push_back(term("leakage", k, dim, {{f7, 1.0}}));

  // Load torque acts on the nacelle rotation and on the motor side.
  g.load_input = Vector::Zero(dim);
  g.load_input.segment(sc.n, sc.n) = -mr;
  g.load_input(f6) = -1.0 / hyd.JG;
  return std::move(g);
}

DiscreteGenerator assemble_hydraulic_feedback(const DiscreteGenerator& hydraulic, double k) {
  require_nonnegative("k_fb", k);
  if (hydraulic.load_input.size() != hydraulic.dim()) {
    throw ValidationError("assemble_hydraulic_feedback: generator has no load input");
  }
  DiscreteGenerator g = hydraulic;
  g.model = "hydraulic_feedback";
  if (k == 0.0) return g;
  const Vector sharp = hydraulic.gram * hydraulic.load_input;  // B^# z = sharp^T z
  g.A -= k * hydraulic.load_input * sharp.transpose();
  g.damping.push_back({"load_feedback", k, sharp});
  return g;
}

PassiveSystem scole_block(const BeamMatrices& beam, const BeamParameters& params, BeamPort port) {
  BeamScaffold sc = beam_scaffold(beam, params, 0);
  const int dim = sc.gen.dim();
  const int idx = port == BeamPort::tip_velocity ? sc.vt : sc.vr;
  PassiveSystem sys;
  sys.A = sc.gen.A;
  sys.gram = sc.gen.gram;
  sys.C = Matrix::Zero(1, dim);
  sys.C(0, idx) = 1.0;
  sys.B = sys.gram.llt().solve(Matrix(sys.C.transpose()));
  sys.D = Matrix::Zero(1, 1);
  return sys;
}

BeamPort nacelle_port(ModelKind kind) {
  switch (kind) {
    case ModelKind::torque:
    case ModelKind::hydraulic:
    case ModelKind::hydraulic_feedback:
      return BeamPort::tip_angular_velocity;
    default:
      return BeamPort::tip_velocity;
  }
}

PassiveSystem nacelle_block(ModelKind kind, const BlockParameters& p) {
  require_positive("m", p.m);
  require_positive("J", p.J);
  PassiveSystem sys;
  switch (kind) {
    case ModelKind::combined:
      require_nonnegative("a", p.a);
      require_nonnegative("b", p.b);
      sys.A = Eigen::Vector2d(-p.a / p.m, -p.b / p.J).asDiagonal();
      sys.B = Eigen::Vector2d(1.0 / p.m, 1.0 / p.J).asDiagonal();
      sys.C = Matrix::Identity(2, 2);
      sys.D = Matrix::Zero(2, 2);
      sys.gram = Eigen::Vector2d(p.m, p.J).asDiagonal();
      break;
    case ModelKind::torque:
      require_nonnegative("b", p.b);
      sys.A = Matrix::Constant(1, 1, -p.b / p.J);
      sys.B = Matrix::Constant(1, 1, 1.0 / p.J);
      sys.C = Matrix::Constant(1, 1, 1.0);
      sys.D = Matrix::Zero(1, 1);
      sys.gram = Matrix::Constant(1, 1, p.J);
      break;
    case ModelKind::force:
      require_nonnegative("a", p.a);
      sys.A = Matrix::Constant(1, 1, -p.a / p.m);
      sys.B = Matrix::Constant(1, 1, 1.0 / p.m);
      sys.C = Matrix::Constant(1, 1, 1.0);
      sys.D = Matrix::Zero(1, 1);
      sys.gram = Matrix::Constant(1, 1, p.m);
      break;
    case ModelKind::tmd: {
      const TmdParameters& t = p.tmd;
      t.validate();
      sys.A.resize(2, 2);
      sys.A << 0.0, 1.0, -t.k1 / t.m1, -t.d1 / t.m1;
      sys.B.resize(2, 1);
      sys.B << 1.0, -t.d1 / t.m1;
      sys.C.resize(1, 2);
      sys.C << t.k1, t.d1;
      sys.D = Matrix::Constant(1, 1, t.d1);
      sys.gram = Eigen::Vector2d(t.k1, t.m1).asDiagonal();
      break;
    }
    case ModelKind::hydraulic: {
      const HydraulicParameters& h = p.hyd;
      h.validate();
      const double bv = h.beta / h.V;
      sys.A.resize(3, 3);
      sys.A << -h.Bp / h.JT, 0.0, -h.Dp / h.JT,
               0.0, -h.Bm / h.JG, h.Dm / h.JG,
               bv * h.Dp, -bv * h.Dm, -bv * h.kleak();
      sys.B.resize(3, 1);
      sys.B << -h.Bp / h.JT, h.Bm / h.JG, bv * (h.Dp + h.Dm);
      sys.C.resize(1, 3);
      sys.C << h.Bp, -h.Bm, h.Dp + h.Dm;
      sys.D = Matrix::Constant(1, 1, h.Bp + h.Bm);
      sys.gram = Eigen::Vector3d(h.JT, h.JG, h.V / h.beta).asDiagonal();
      break;
    }
    case ModelKind::hydraulic_feedback:
      throw ValidationError("the feedback model has no separate nacelle block");
  }
  return sys;
}

std::array<double, 3> hydraulic_n_coefficients(const HydraulicParameters& h) {
  const double Bp = h.Bp, Bm = h.Bm, Dp = h.Dp, Dm = h.Dm, k = h.kleak();
  const double a2 = Bm + Bp;
  const double a1 = (Bm * Bp + k * k) * (Bm + Bp) + (Dm + Dp) * (Dm + Dp) * k +
                    2.0 * (Bm * Dp - Bp * Dm) * (Dm - Dp);
  const double cross = Bm * Dp - Bp * Dm;
  const double a0 = (Bm * Dp * Dp + Bp * Dm * Dm) * (Dm - Dp) * (Dm - Dp) +
                    Bm * Bp * (Bm + Bp) * k * k +
                    (2.0 * Bm * Bp * (Dm * Dm + Dp * Dp) + cross * cross) * k;
  return {a2, a1, a0};
}

std::array<double, 4> hydraulic_d_coefficients(const HydraulicParameters& h) {
  const double Bp = h.Bp, Bm = h.Bm, Dp = h.Dp, Dm = h.Dm, k = h.kleak();
  const double Bp2 = Bp * Bp, Bm2 = Bm * Bm, Dp2 = Dp * Dp, Dm2 = Dm * Dm, k2 = k * k;
  const double d4 = Bm2 + Bp2 - 2.0 * Dm2 - 2.0 * Dp2 + k2;
  const double d2 = Bm2 * Bp2 - 2.0 * Bm2 * Dp2 + Bm2 * k2 + Dp2 * Dp2 - 2.0 * Bp2 * Dm2 +
                    Bp2 * k2 + 2.0 * Bp * Dp2 * k + Dm2 * Dm2 + 2.0 * Dm2 * Dp2 +
                    2.0 * Bm * Dm2 * k;
  const double d0 = Bm2 * Bp2 * k2 + 2.0 * Bm2 * Bp * Dp2 * k + Bm2 * Dp2 * Dp2 +
                    2.0 * Bm * Bp2 * Dm2 * k + 2.0 * Bm * Bp * Dm2 * Dp2 + Bp2 * Dm2 * Dm2;
  return {1.0, d4, d2, d0};
}

std::array<double, 4> hydraulic_characteristic(const HydraulicParameters& h) {
  const double Bp = h.Bp, Bm = h.Bm, Dp = h.Dp, Dm = h.Dm, k = h.kleak();
  return {1.0, Bm + Bp + k, Dm * Dm + Dp * Dp + Bm * k + Bp * k + Bm * Bp,
          Bp * Dm * Dm + Bm * Dp * Dp + Bm * Bp * k};
}

Matrix closed_form_reH2(ModelKind kind, const BlockParameters& p, double s) {
  using LD = long double;
  const LD s2 = static_cast<LD>(s) * s;
  const LD tiny = 1e-300L;
  switch (kind) {
    case ModelKind::combined: {
      const LD am = static_cast<LD>(p.a) / p.m;
      const LD bj = static_cast<LD>(p.b) / p.J;
      const LD t = s2 - am * bj;
      const LD den = t * t + (bj + am) * (bj + am) * s2;
      if (!(std::abs(den) > tiny)) throw denominator_hit(s, "combined");
      Matrix out = Matrix::Zero(2, 2);
      out(0, 0) = static_cast<double>(am * (s2 + bj * bj) / den);
      out(1, 1) = static_cast<double>(bj * (s2 + am * am) / den);
      return out;
    }
    case ModelKind::torque: {
      const LD bj = static_cast<LD>(p.b) / p.J;
      const LD den = bj * bj + s2;
      if (!(den > tiny)) throw denominator_hit(s, "torque");
      return Matrix::Constant(1, 1, static_cast<double>(bj / den));
    }
    case ModelKind::force: {
      const LD am = static_cast<LD>(p.a) / p.m;
      const LD den = am * am + s2;
      if (!(den > tiny)) throw denominator_hit(s, "force");
      return Matrix::Constant(1, 1, static_cast<double>(am / den));
    }
    case ModelKind::tmd: {
      const LD d1 = p.tmd.d1, m1 = p.tmd.m1, k1 = p.tmd.k1, m = p.m;
      const LD t = k1 - m1 * s2;
      const LD den = m * (d1 * d1 * s2 + t * t);
      if (!(den > tiny)) throw denominator_hit(s, "tmd");
      return Matrix::Constant(1, 1, static_cast<double>(d1 * m1 * m1 * s2 * s2 / den));
    }
    case ModelKind::hydraulic: {
      const auto n = hydraulic_n_coefficients(p.hyd);
      const auto d = hydraulic_d_coefficients(p.hyd);
      const LD nv = (static_cast<LD>(n[0]) * s2 + n[1]) * s2 + n[2];
      const LD dv = ((s2 + d[1]) * s2 + d[2]) * s2 + d[3];
      if (!(std::abs(dv) > tiny)) throw denominator_hit(s, "hydraulic");
      return Matrix::Constant(1, 1, static_cast<double>(s2 * nv / dv));
    }
    case ModelKind::hydraulic_feedback:
      break;
  }
  throw ValidationError("no closed form for model " + std::string(to_string(kind)));
}

HydraulicPositivityReport hydraulic_positivity_check(const HydraulicParameters& hyd,
                                                     std::span<const double> s_grid) {
  hyd.validate();
  if (!hyd.damped()) throw ValidationError("hydraulic positivity requires Bp + Bm > 0");
  HydraulicPositivityReport rep;
  const auto [a2, a1, a0] = hydraulic_n_coefficients(hyd);
  rep.a2 = a2;
  rep.a1 = a1;
  rep.a0 = a0;
  rep.discriminant = a1 * a1 - 4.0 * a2 * a0;

  const double scale = std::max({1.0, std::abs(a2), std::abs(a1), std::abs(a0)});
  rep.a0_zero = std::abs(a0) <= 1e-14 * scale * scale;
  if (rep.a0_zero) {
    rep.a0_branch_ok = std::abs(hyd.Dm - hyd.Dp) <= 1e-6 * std::max(hyd.Dm, hyd.Dp);
  }
  if (a1 <= 0.0) {
    const double tol = 1e-12 * (a1 * a1 + 4.0 * std::abs(a2 * a0));
    rep.implication_ok = rep.discriminant <= tol;
  }
  for (const double s : s_grid) {
    if (s == 0.0) continue;
    const double s2 = s * s;
    const double n = (a2 * s2 + a1) * s2 + a0;
    if (!(n > 0.0)) {
      if (rep.n_violations == 0) rep.worst_s = s;
      ++rep.n_violations;
    }
  }
  const auto cubic = hydraulic_characteristic(hyd);
  rep.hurwitz = routh_hurwitz(cubic);
  const CVector roots = companion_roots(cubic);
  rep.companion_stable = (roots.real().array() < 0.0).all();
  return rep;
}

void ModelSpec::validate() const {
  beam.validate();
  if (n_elements < 1) throw ValidationError("n_elements must be >= 1");
  switch (kind) {
    case ModelKind::combined:
      require_nonnegative("a", a);
      require_nonnegative("b", b);
      break;
    case ModelKind::torque:
      require_nonnegative("b", b);
      break;
    case ModelKind::force:
      require_nonnegative("a", a);
      break;
    case ModelKind::tmd:
      tmd.validate();
      break;
    case ModelKind::hydraulic:
      hyd.validate();
      break;
    case ModelKind::hydraulic_feedback:
      hyd.validate();
      require_nonnegative("k_fb", k_fb);
      break;
  }
}

BlockParameters ModelSpec::block() const {
  BlockParameters p;
  p.m = beam.m;
  p.J = beam.J;
  p.a = kind == ModelKind::torque ? 0.0 : a;
  p.b = kind == ModelKind::force ? 0.0 : b;
  p.tmd = tmd;
  p.hyd = hyd;
  return p;
}

DiscreteGenerator assemble_model(const ModelSpec& spec, const BeamMatrices& beam) {
  spec.validate();
  switch (spec.kind) {
    case ModelKind::combined: return assemble_combined(beam, spec.beam, spec.a, spec.b);
    case ModelKind::torque: return assemble_torque(beam, spec.beam, spec.b);
    case ModelKind::force: return assemble_force(beam, spec.beam, spec.a);
    case ModelKind::tmd: return assemble_tmd(beam, spec.beam, spec.tmd);
    case ModelKind::hydraulic: return assemble_hydraulic(beam, spec.beam, spec.hyd);
    case ModelKind::hydraulic_feedback:
      return assemble_hydraulic_feedback(assemble_hydraulic(beam, spec.beam, spec.hyd), spec.k_fb);
  }
  throw ValidationError("unknown model kind");
}

DiscreteGenerator assemble_model(const ModelSpec& spec) {
  spec.validate();
  return assemble_model(spec, build_beam_matrices(spec.beam, spec.n_elements));
}

}  // namespace scole
