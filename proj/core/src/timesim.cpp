#include "scole/timesim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "scole/beam_fem.hpp"
#include "scole/errors.hpp"

namespace scole {

EnergyTrajectory simulate(const DiscreteGenerator& gen, const Vector& z0, double T, double dt,
                          int record_every) {
  gen.validate();
  if (!(dt > 0.0)) throw ValidationError("simulate: dt must be > 0");
  if (!(T >= 0.0)) throw ValidationError("simulate: T must be >= 0");
  if (record_every < 1) throw ValidationError("simulate: record_every must be >= 1");
  if (z0.size() != gen.dim()) {
    throw ValidationError("simulate: initial state has dimension " + std::to_string(z0.size()) +
                          ", generator has " + std::to_string(gen.dim()));
  }

  const EnergyFactor U(gen.gram);
  const Matrix a_hat = U.similarity(gen.A);
  const int n = gen.dim();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix explicit_half = I + 0.5 * dt * a_hat;
  Eigen::PartialPivLU<Matrix> implicit_half(I - 0.5 * dt * a_hat);
  const double rcond = implicit_half.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "simulate: I - dt/2 A is singular (rcond " << rcond << ", dt " << dt << ")";
    throw NumericalError(os.str());
  }

  // Channel directions read energy coordinates: c^T z = (U^{-T} c)^T y.
  Matrix readout(static_cast<Eigen::Index>(gen.damping.size()), n);
  for (std::size_t j = 0; j < gen.damping.size(); ++j) {
    readout.row(static_cast<Eigen::Index>(j)) = U.dual(gen.damping[j].direction).transpose();
  }

  EnergyTrajectory traj;
  traj.dt = dt;
  traj.record_every = record_every;
  traj.channel_names = gen.channel_names();
  const long steps = std::lround(std::ceil(T / dt - 1e-9));
  traj.steps = steps;

  Vector y = U.to_energy(z0);
  auto record = [&](long step, const Vector& state) {
    traj.times.push_back(step * dt);
    traj.energies.push_back(0.5 * state.squaredNorm());
    const Vector ch = readout * state;
    traj.channels.emplace_back(ch.data(), ch.data() + ch.size());
  };
  record(0, y);

  double e_prev = 0.5 * y.squaredNorm();
  Vector rhs(n);
  for (long k = 1; k <= steps; ++k) {
    rhs.noalias() = explicit_half * y;
    y = implicit_half.solve(rhs);
    const double e = 0.5 * y.squaredNorm();
    if (e_prev > 0.0) traj.max_relative_increase = std::max(traj.max_relative_increase, e / e_prev - 1.0);
    e_prev = e;
    if (k % record_every == 0 || k == steps) record(k, y);
  }
  if (!y.allFinite()) throw NumericalError("simulate: state became non-finite");
  traj.monotone = traj.max_relative_increase <= 1e-10;
  traj.final_state = U.from_energy(y);
  return traj;
}

namespace {

struct BeamModes {
  Vector omega;
  Matrix phi;  // columns M-normalized
};

BeamModes beam_modes(const DiscreteGenerator& gen) {
  if (gen.n_dof <= 0) throw ValidationError("generator has no beam part");
  const int n = gen.n_dof;
  const Matrix K = gen.gram.topLeftCorner(n, n);
  const Matrix M = gen.gram.block(n, n, n, n);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(K, M);
  if (es.info() != Eigen::Success) throw NumericalError("undamped modal eigensolve failed");
  BeamModes modes;
  modes.omega = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  modes.phi = es.eigenvectors();
  return modes;
}

}  // namespace

std::vector<double> undamped_frequencies(const DiscreteGenerator& gen, int count) {
  const BeamModes modes = beam_modes(gen);
  count = std::min<int>(count, static_cast<int>(modes.omega.size()));
  return {modes.omega.data(), modes.omega.data() + count};
}

Vector classical_initial_data(const DiscreteGenerator& gen, InitialProfile profile, int k_modes,
                              double magnitude) {
  if (gen.n_dof <= 0) throw ValidationError("initial data needs a beam-based generator");
  const int n = gen.n_dof;
  Vector z = Vector::Zero(gen.dim());
  switch (profile) {
    case InitialProfile::smooth_modal: {
      if (k_modes < 1) throw ValidationError("smooth_modal: k_modes must be >= 1");
      if (k_modes > n) {
        throw ValidationError("smooth_modal: " + std::to_string(k_modes) + " modes requested, only " +
                              std::to_string(n) + " available");
      }
      const BeamModes modes = beam_modes(gen);
      for (int k = 0; k < k_modes; ++k) {
        Vector phi = modes.phi.col(k);
        if (phi(gen.tip_disp_index) < 0.0) phi = -phi;
        const double weight = 1.0 / ((k + 1.0) * (k + 1.0));
        z.head(n) += magnitude * weight * phi / modes.omega(k);
      }
      break;
    }
    case InitialProfile::tip_kick:
      z(n + gen.tip_disp_index) = magnitude;
      break;
    case InitialProfile::static_bend: {
      BeamMatrices layout;
      layout.n_dof = n;
      layout.n_elements = gen.n_elements;
      layout.h = 1.0 / gen.n_elements;
      z.head(n) = magnitude * hermite_interpolant(layout, [](double x) { return x * x; },
                                                  [](double x) { return 2.0 * x; });
      break;
    }
  }
  return z;
}

DissipationCheck verify_dissipation_identity(const DiscreteGenerator& gen,
                                             const EnergyTrajectory& traj) {
  if (traj.record_every != 1) {
    throw ValidationError("dissipation check needs channels at every step (record_every = 1)");
  }
  if (traj.channel_names != gen.channel_names()) {
    throw ValidationError("trajectory channels do not match the generator's damping terms");
  }
  if (traj.energies.size() < 2) throw ValidationError("dissipation check needs at least one step");
  DissipationCheck out;
  for (std::size_t i = 0; i + 1 < traj.energies.size(); ++i) {
    const double h = traj.times[i + 1] - traj.times[i];
    const double rate = (traj.energies[i + 1] - traj.energies[i]) / h;
    double diss = 0.0;
    for (std::size_t j = 0; j < gen.damping.size(); ++j) {
      const double mid = 0.5 * (traj.channels[i][j] + traj.channels[i + 1][j]);
      diss -= gen.damping[j].gain * mid * mid;
    }
    const double r = std::abs(rate - diss);
    if (r > out.max_residual) {
      out.max_residual = r;
      out.worst_step = static_cast<int>(i);
    }
  }
  const double e0 = traj.energies.front();
  out.relative = e0 > 0.0 ? out.max_residual / e0 : out.max_residual;
  return out;
}

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& energy,
                        double t_lo, double t_hi) {
  if (t.size() != energy.size()) throw ValidationError("fit_decay_rate: size mismatch");
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw ValidationError("fit_decay_rate: need 0 < t_lo < t_hi");
  if (t.empty() || t_lo < t.front() || t_hi > t.back() + 1e-9 * std::max(1.0, t.back())) {
    throw ValidationError("fit_decay_rate: window is not inside the trajectory");
  }
  std::vector<double> u, le;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(energy[i] > 0.0)) throw ValidationError("fit_decay_rate: zero energy inside the window");
    u.push_back(std::log(t[i]));
    le.push_back(std::log(energy[i]));
  }
  if (u.size() < 3) throw ValidationError("fit_decay_rate: fewer than three samples in the window");

  DecayFit fit;
  const LineFit line = fit_line(u, le);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.count = line.count;

  const auto m = static_cast<Eigen::Index>(u.size());
  Matrix V(m, 3);
  Vector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    V(i, 0) = 1.0;
    V(i, 1) = u[i];
    V(i, 2) = u[i] * u[i];
    rhs(i) = le[i];
  }
  const Vector c = V.colPivHouseholderQr().solve(rhs);
  fit.curvature = 2.0 * c(2) * (u.back() - u.front());
  fit.power_law = std::abs(fit.curvature) <= 0.5;
  return fit;
}

DecayFit fit_decay_rate(const EnergyTrajectory& traj, double t_lo, double t_hi) {
  return fit_decay_rate(traj.times, traj.energies, t_lo, t_hi);
}

}  // namespace scole
