#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "scole/beam_fem.hpp"
#include "scole/generator.hpp"
#include "scole/passive.hpp"

namespace scole {

enum class ModelKind { combined, torque, force, tmd, hydraulic, hydraulic_feedback };

std::string_view to_string(ModelKind kind);
/// Throws ValidationError for unknown names.
ModelKind model_kind_from_string(std::string_view name);

/// Tuned mass damper attached at the nacelle.
struct TmdParameters {
  double m1 = 1.0;
  double k1 = 1.0;
  double d1 = 1.0;
  void validate() const;
};

/// Hydrostatic drivetrain between rotor and generator.
struct HydraulicParameters {
  double Dp = 1.0;
  double Dm = 1.0;
  double Bp = 1.0;
  double Bm = 1.0;
  double kleak_p = 0.0;
  double kleak_m = 0.0;
  double beta = 1.0;
  double V = 1.0;
  double JT = 1.0;
  double JG = 1.0;

  double kleak() const { return kleak_p + kleak_m; }
  /// Positivity of every field. Bp + Bm = 0 is accepted here; see damped().
  void validate() const;
  bool damped() const { return Bp + Bm > 0.0; }
};

/// Parameters of the nacelle-side passive block for every model kind.
struct BlockParameters {
  double m = 1.0;
  double J = 1.0;
  double a = 1.0;
  double b = 1.0;
  TmdParameters tmd;
  HydraulicParameters hyd;
};

/// Tip damping with gains a (force) and b (torque) on the tip velocities.
DiscreteGenerator assemble_combined(const BeamMatrices& beam, const BeamParameters& params,
                                    double a, double b);
DiscreteGenerator assemble_torque(const BeamMatrices& beam, const BeamParameters& params, double b);
DiscreteGenerator assemble_force(const BeamMatrices& beam, const BeamParameters& params, double a);

/// Beam with a tuned mass damper; extra states p - w(1) and p_t.
DiscreteGenerator assemble_tmd(const BeamMatrices& beam, const BeamParameters& params,
                               const TmdParameters& tmd);

/// Beam with the hydrostatic transmission; extra states Omega_p + w_xt(1),
/// Omega_m - w_xt(1) and the line pressure P, weighted by JT, JG and V / beta.
/// The load-torque input is stored in load_input.
DiscreteGenerator assemble_hydraulic(const BeamMatrices& beam, const BeamParameters& params,
                                     const HydraulicParameters& hyd);

/// Closes the hydraulic model with the load torque u = -k y, y = B^# z, where B^#
/// is the Gram adjoint of the load input. k = 0 returns the generator unchanged.
DiscreteGenerator assemble_hydraulic_feedback(const DiscreteGenerator& hydraulic, double k);

/// Which tip velocity the beam block exposes as its port.
enum class BeamPort { tip_velocity, tip_angular_velocity };

/// Undamped clamped beam with tip body as a passive block: A = A_sc, C = e_port^T,
/// B = gram^{-1} C^T, D = 0.
PassiveSystem scole_block(const BeamMatrices& beam, const BeamParameters& params, BeamPort port);

/// Nacelle-side block (A2, B2, C2, D2, gram) of the given kind. The feedback kind
/// has no block of its own and is rejected.
PassiveSystem nacelle_block(ModelKind kind, const BlockParameters& p);

/// The beam port the nacelle block of this kind attaches to.
BeamPort nacelle_port(ModelKind kind);

/// Hermitian part of H2(is) from the closed-form expressions (combined 2x2, the rest
/// scalar). Hydraulic uses s^2 n(s) / d(s), which assumes unit JT, JG and beta / V.
/// Throws SpectrumHit when the denominator vanishes.
Matrix closed_form_reH2(ModelKind kind, const BlockParameters& p, double s);

/// n(s) = a2 s^4 + a1 s^2 + a0.
std::array<double, 3> hydraulic_n_coefficients(const HydraulicParameters& hyd);
/// d(s) = s^6 + d4 s^4 + d2 s^2 + d0, returned as {1, d4, d2, d0}.
std::array<double, 4> hydraulic_d_coefficients(const HydraulicParameters& hyd);
/// det(lambda - A2) for unit inertias, returned monic in descending order.
std::array<double, 4> hydraulic_characteristic(const HydraulicParameters& hyd);

struct HydraulicPositivityReport {
  double a2 = 0.0, a1 = 0.0, a0 = 0.0;
  double discriminant = 0.0;  ///< a1^2 - 4 a2 a0, evaluated directly
  bool a0_zero = false;
  bool a0_branch_ok = true;      ///< a0 = 0 only when Dm = Dp
  bool implication_ok = true;    ///< a1 <= 0 implies a1^2 - 4 a2 a0 <= 0
  int n_violations = 0;          ///< grid points s != 0 with n(s) <= 0
  double worst_s = 0.0;
  bool hurwitz = false;          ///< Routh-Hurwitz on the characteristic cubic
  bool companion_stable = false; ///< all companion-matrix roots in Re < 0
  bool ok() const {
    return a2 > 0.0 && a0_branch_ok && implication_ok && n_violations == 0 &&
           hurwitz == companion_stable;
  }
};

/// Requires Bp + Bm > 0 and Dp, Dm > 0. Grid points with s = 0 are skipped.
HydraulicPositivityReport hydraulic_positivity_check(const HydraulicParameters& hyd,
                                                     std::span<const double> s_grid);

/// Everything needed to build one closed-loop generator.
struct ModelSpec {
  ModelKind kind = ModelKind::combined;
  BeamParameters beam = BeamParameters::uniform();
  int n_elements = 16;
  double a = 1.0;
  double b = 1.0;
  TmdParameters tmd;
  HydraulicParameters hyd;
  double k_fb = 1.0;

  void validate() const;
  BlockParameters block() const;
};

DiscreteGenerator assemble_model(const ModelSpec& spec);
DiscreteGenerator assemble_model(const ModelSpec& spec, const BeamMatrices& beam);

}  // namespace scole
