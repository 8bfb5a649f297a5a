#pragma once

#include <string>
#include <vector>

#include "scole/generator.hpp"
#include "scole/linalg.hpp"

namespace scole {

struct EnergyTrajectory {
  std::vector<double> times;
  std::vector<double> energies;  ///< 1/2 |z|^2_gram at each recorded time
  std::vector<std::string> channel_names;
  /// channels[i][j]: channel j at recorded time i
  std::vector<std::vector<double>> channels;
  double dt = 0.0;
  int record_every = 1;
  long steps = 0;
  /// Largest E_{n+1} / E_n - 1 over every step (not only recorded ones).
  double max_relative_increase = 0.0;
  bool monotone = true;  ///< max_relative_increase <= 1e-10
  Vector final_state;
};

/// Implicit midpoint (I - dt/2 A) z_{n+1} = (I + dt/2 A) z_n, run in energy
/// coordinates with a single LU factorization. Records every record_every steps and
/// always the last step.
EnergyTrajectory simulate(const DiscreteGenerator& gen, const Vector& z0, double T, double dt,
                          int record_every = 1);

enum class InitialProfile { smooth_modal, tip_kick, static_bend };

/// smooth_modal: sum over the lowest k_modes undamped modes phi_k (phi^T M phi = 1)
///   of k^{-2} phi_k / omega_k in the displacement, signed so that w(1) > 0.
/// tip_kick: w_t(1) = magnitude, everything else zero.
/// static_bend: w(x) = magnitude * x^2 interpolated, zero velocity.
Vector classical_initial_data(const DiscreteGenerator& gen, InitialProfile profile,
                              int k_modes = 12, double magnitude = 1.0);

/// Lowest undamped angular frequencies of the beam part (K, Mfull).
std::vector<double> undamped_frequencies(const DiscreteGenerator& gen, int count);

struct DissipationCheck {
  double max_residual = 0.0;   ///< max |(E_{n+1} - E_n)/dt - dissipation(z_mid)|
  double relative = 0.0;       ///< max_residual / E(0)
  int worst_step = 0;
};

/// Compares each energy increment with the model dissipation at the midpoint state.
/// Needs a trajectory recorded at every step (midpoint channels are the average of
/// consecutive records).
DissipationCheck verify_dissipation_identity(const DiscreteGenerator& gen,
                                             const EnergyTrajectory& traj);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  int count = 0;
  /// 2 c2 (u_hi - u_lo) for the quadratic fit c0 + c1 u + c2 u^2, u = log t: the
  /// change of local slope across the window.
  double curvature = 0.0;
  bool power_law = true;  ///< |curvature| <= 0.5
};

DecayFit fit_decay_rate(const EnergyTrajectory& traj, double t_lo, double t_hi);
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& energy,
                        double t_lo, double t_hi);

}  // namespace scole
