#include <doctest.h>

#include <cmath>
#include <vector>

#include "scole/errors.hpp"
#include "scole/models.hpp"
#include "scole/timesim.hpp"

using namespace scole;

namespace {

DiscreteGenerator scalar_generator(double a) {
  DiscreteGenerator g;
  g.model = "scalar";
  g.A = Matrix::Constant(1, 1, a);
  g.gram = Matrix::Identity(1, 1);
  g.labels = {"x"};
  g.damping.push_back({"x", -a, Vector::Ones(1)});
  return g;
}

DiscreteGenerator desk(ModelKind kind, int n = 16) {
  ModelSpec spec;
  spec.kind = kind;
  spec.n_elements = n;
  return assemble_model(spec);
}

}  // namespace

TEST_SUITE("timesim") {
  TEST_CASE("scalar decay matches the closed form and the discrete oracle") {
    const EnergyTrajectory t = simulate(scalar_generator(-1.0), Vector::Ones(1), 1.0, 0.1);
    REQUIRE(t.times.size() == 11);
    CHECK(t.times.back() == doctest::Approx(1.0));
    const double amp = std::pow((1.0 - 0.05) / (1.0 + 0.05), 10);
    CHECK(t.energies.back() == doctest::Approx(0.5 * amp * amp).epsilon(1e-14));
    // The midpoint rule at dt = 0.1 is 1.7e-3 off the exact energy at t = 1.
    CHECK(t.energies.back() == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(2e-3));
    CHECK(t.monotone);
  }

  TEST_CASE("conservation on the undamped model over 1e4 steps") {
    const BeamParameters p = BeamParameters::uniform();
    const DiscreteGenerator g = assemble_combined(build_beam_matrices(p, 16), p, 0.0, 0.0);
    const Vector z0 = classical_initial_data(g, InitialProfile::smooth_modal, 12);
    const EnergyTrajectory t = simulate(g, z0, 1e4 * 1e-3, 1e-3, 100);
    CHECK(t.steps == 10000);
    const double e0 = t.energies.front();
    double drift = 0.0;
    for (double e : t.energies) drift = std::max(drift, std::abs(e - e0) / e0);
    CHECK(drift <= 1e-9);
  }

  TEST_CASE("dissipation identities along trajectories") {
    for (ModelKind kind : {ModelKind::combined, ModelKind::torque, ModelKind::force, ModelKind::tmd,
                           ModelKind::hydraulic, ModelKind::hydraulic_feedback}) {
      const DiscreteGenerator g = desk(kind);
      const Vector z0 = classical_initial_data(g, InitialProfile::smooth_modal, 12);
      const EnergyTrajectory t = simulate(g, z0, 2.0, 1e-3);
      const DissipationCheck d = verify_dissipation_identity(g, t);
      CAPTURE(to_string(kind));
      CHECK(d.relative <= 1e-9);
      CHECK(t.monotone);
    }
  }

  TEST_CASE("undamped residual is at rounding level") {
    const BeamParameters p = BeamParameters::uniform();
    const DiscreteGenerator g = assemble_combined(build_beam_matrices(p, 8), p, 0.0, 0.0);
    const EnergyTrajectory t =
        simulate(g, classical_initial_data(g, InitialProfile::static_bend), 10.0, 1e-2);
    // Energy differences carry a few ulps of E per step.
    CHECK(verify_dissipation_identity(g, t).relative <= 1e-11);
  }

  TEST_CASE("dissipation check needs every step") {
    const DiscreteGenerator g = scalar_generator(-1.0);
    const EnergyTrajectory t = simulate(g, Vector::Ones(1), 1.0, 0.01, 10);
    CHECK_THROWS_AS(verify_dissipation_identity(g, t), ValidationError);
  }

  TEST_CASE("second-order convergence under step halving") {
    const DiscreteGenerator g = desk(ModelKind::combined, 8);
    const Vector z0 = classical_initial_data(g, InitialProfile::smooth_modal, 4);
    std::vector<Vector> finals;
    for (double dt : {4e-3, 2e-3, 1e-3}) finals.push_back(simulate(g, z0, 1.0, dt, 1000).final_state);
    const double e1 = (finals[0] - finals[1]).norm();
    const double e2 = (finals[1] - finals[2]).norm();
    CHECK(std::log2(e1 / e2) >= 1.8);
  }

  TEST_CASE("initial data profiles") {
    const DiscreteGenerator g = desk(ModelKind::combined);
    const Vector bend = classical_initial_data(g, InitialProfile::static_bend);
    CHECK(evaluate_energy(bend, g.gram) == doctest::Approx(2.0).epsilon(1e-12));

    const Vector kick = classical_initial_data(g, InitialProfile::tip_kick);
    const int vt = g.index_of("w_t(1)");
    CHECK(evaluate_energy(kick, g.gram) == doctest::Approx(0.5 * g.gram(vt, vt)));

    const Vector m12 = classical_initial_data(g, InitialProfile::smooth_modal, 12);
    CHECK(m12(g.tip_disp_index) > 0.0);
    CHECK(m12.tail(g.dim() - g.n_dof).norm() == 0.0);
    // Modes in energy normalization with k^{-2} weights: E = 1/2 sum k^{-4}.
    double expect = 0.0;
    for (int k = 1; k <= 12; ++k) expect += 0.5 / std::pow(k, 4);
    CHECK(evaluate_energy(m12, g.gram) == doctest::Approx(expect).epsilon(1e-10));
    CHECK_THROWS_AS(classical_initial_data(g, InitialProfile::smooth_modal, 1000), ValidationError);
  }

  TEST_CASE("single mode decays with an exponential envelope") {
    const DiscreteGenerator g = desk(ModelKind::combined, 8);
    const Vector z0 = classical_initial_data(g, InitialProfile::smooth_modal, 1);
    const EnergyTrajectory t = simulate(g, z0, 20.0, 1e-3, 100);
    // Envelope of log E is close to linear in t: compare decay over two halves.
    const double e0 = t.energies.front();
    const double e_mid = t.energies[t.energies.size() / 2];
    const double e_end = t.energies.back();
    const double r1 = std::log(e0 / e_mid);
    const double r2 = std::log(e_mid / e_end);
    CHECK(r1 > 0.0);
    CHECK(r2 == doctest::Approx(r1).epsilon(0.3));
  }

  TEST_CASE("decay-rate fits on synthetic data") {
    std::vector<double> t, e1, e2;
    for (int i = 0; i <= 1000; ++i) {
      t.push_back(1.0 + 0.1 * i);
      e1.push_back(1.0 / t.back());
      e2.push_back(std::exp(-t.back()));
    }
    const DecayFit power = fit_decay_rate(t, e1, 5.0, 50.0);
    CHECK(power.slope == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(power.power_law);
    const DecayFit expo = fit_decay_rate(t, e2, 5.0, 50.0);
    CHECK(expo.slope < -5.0);
    CHECK_FALSE(expo.power_law);
    CHECK_THROWS_AS(fit_decay_rate(t, e1, 5.0, 500.0), ValidationError);
    std::vector<double> zeros(t.size(), 0.0);
    CHECK_THROWS_AS(fit_decay_rate(t, zeros, 5.0, 50.0), ValidationError);
  }

  TEST_CASE("combined fixture energy strictly decreases") {
    const DiscreteGenerator g = desk(ModelKind::combined);
    const EnergyTrajectory t =
        simulate(g, classical_initial_data(g, InitialProfile::smooth_modal, 12), 5.0, 1e-3, 50);
    for (std::size_t i = 1; i < t.energies.size(); ++i) CHECK(t.energies[i] < t.energies[i - 1]);
  }
}
