#include <doctest.h>

#include <cmath>
#include <random>

#include "scole/errors.hpp"
#include "scole/models.hpp"
#include "scole/passive.hpp"

using namespace scole;

namespace {

PassiveSystem scalar(double a, double b, double c, double d, double g = 1.0) {
  return {Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b), Matrix::Constant(1, 1, c),
          Matrix::Constant(1, 1, d), Matrix::Constant(1, 1, g)};
}

PassiveSystem lossless(int n, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PassiveSystem sys = random_passive_system(n, p, rng, false);
  sys.A += sys.B * sys.B.transpose();  // leaves the skew part only
  return sys;
}

}  // namespace

TEST_SUITE("passive_core") {
  TEST_CASE("torque block is passive") {
    const PassiveSystem t = nacelle_block(ModelKind::torque, BlockParameters{});
    const PassivityReport rep = verify_passivity(t, 200, 1);
    CHECK(rep.passive());
    CHECK(rep.min_defect >= 0.0);
  }

  TEST_CASE("lossless block has zero defect") {
    const PassiveSystem sys = lossless(5, 2, 3);
    const PassivityReport rep = verify_passivity(sys, 200, 2);
    CHECK(rep.passive());
    CHECK(std::abs(rep.min_defect) < 1e-13);
    CHECK(std::abs(rep.certificate) < 1e-12);
  }

  TEST_CASE("hydraulic block defect matches the sum of squares") {
    BlockParameters p;
    p.hyd.kleak_p = 0.3;
    p.hyd.Bp = 0.7;
    const PassiveSystem h = nacelle_block(ModelKind::hydraulic, p);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    const ComplexPassiveSystem hc = to_complex(h);
    for (int i = 0; i < 100; ++i) {
      CVector x(3);
      for (int j = 0; j < 3; ++j) x(j) = Complex(nd(rng), nd(rng));
      CVector u(1);
      u(0) = Complex(nd(rng), nd(rng));
      const double expect = p.hyd.Bp * std::norm(x(0) + u(0)) + p.hyd.Bm * std::norm(x(1) - u(0)) +
                            p.hyd.kleak() * std::norm(x(2));
      CHECK(passivity_defect(hc, x, u) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(verify_passivity(h, 100, 1).passive());
  }

  TEST_CASE("a non-passive block fails both tests") {
    const PassiveSystem bad = scalar(0.5, 1.0, 1.0, 0.0);
    const PassivityReport rep = verify_passivity(bad, 50, 1);
    CHECK_FALSE(rep.sampled_ok);
    CHECK_FALSE(rep.certified);
  }

  TEST_CASE("dimension mismatch is rejected") {
    PassiveSystem sys = scalar(-1, 1, 1, 0);
    sys.C = Matrix::Zero(1, 2);
    CHECK_THROWS_AS(verify_passivity(sys, 1, 1), ValidationError);
  }

  TEST_CASE("transfer function values") {
    const PassiveSystem t = nacelle_block(ModelKind::torque, BlockParameters{});
    const TransferSample t0 = transfer_function(t, 0.0);
    CHECK(t0.H(0, 0).real() == doctest::Approx(1.0));
    CHECK(t0.eta == doctest::Approx(1.0));

    const TransferSample c1 = transfer_function(nacelle_block(ModelKind::combined, BlockParameters{}), 1.0);
    CHECK(c1.H(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c1.H(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));

    const PassiveSystem h = nacelle_block(ModelKind::hydraulic, BlockParameters{});
    const TransferSample big = transfer_function(h, 1e4);
    CHECK(big.H(0, 0).real() == doctest::Approx(2.0).epsilon(1e-3));

    const TransferSample a = transfer_function(h, 2.5);
    const TransferSample b = transfer_function(h, -2.5);
    CHECK(std::abs(a.H(0, 0) - std::conj(b.H(0, 0))) < 1e-14);

    CHECK_THROWS_AS(transfer_function(scalar(0.0, 1.0, 1.0, 0.0), 0.0), SpectrumHit);
  }

  TEST_CASE("passive systems are positive real") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const PassiveSystem sys = random_passive_system(4, 2, rng);
      for (double s : {-10.0, -1.0, 0.0, 0.3, 2.0, 50.0}) {
        CHECK(transfer_function(sys, s).eta >= -1e-10);
      }
    }
  }

  TEST_CASE("eta lower bounds") {
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(-50.0 + 0.5 * i);
    const EtaBound torque = eta_lower_bound(nacelle_block(ModelKind::torque, BlockParameters{}), grid);
    CHECK(torque.M == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(torque.excluded.empty());

    const EtaBound tmd = eta_lower_bound(nacelle_block(ModelKind::tmd, BlockParameters{}),
                                         std::vector<double>{0.0});
    CHECK(std::abs(tmd.eta[0]) < 1e-15);

    const EtaBound l = eta_lower_bound(lossless(4, 1, 9), std::vector<double>{0.1, 1.0, 7.0});
    for (double e : l.eta) CHECK(std::abs(e) < 1e-12);
  }

  TEST_CASE("feedback transform collapses for D = 0 and Q = I") {
    std::mt19937_64 rng(2);
    const PassiveSystem sys = random_passive_system(4, 2, rng, false);
    const PassiveSystem q = feedback_transform(sys, Matrix::Identity(2, 2), 1.0);
    CHECK((q.A - (sys.A - sys.B * sys.C)).norm() < 1e-13);
    CHECK((q.B - sys.B).norm() < 1e-14);
    CHECK((q.C - sys.C).norm() < 1e-14);
    CHECK(q.D.norm() < 1e-14);
  }

  TEST_CASE("feedback on the torque block") {
    const PassiveSystem t = nacelle_block(ModelKind::torque, BlockParameters{});
    const PassiveSystem q = feedback_transform(t, Matrix::Constant(1, 1, 1.0), 1.0);
    // -b/J - (1/J) * 1 * 1 with b = J = 1
    CHECK(q.A(0, 0) == doctest::Approx(-2.0));
    CHECK(verify_passivity(q, 100, 3).passive());
  }

  TEST_CASE("feedback rejects Re Q below c") {
    const PassiveSystem t = nacelle_block(ModelKind::torque, BlockParameters{});
    CHECK_THROWS_AS(feedback_transform(t, Matrix::Constant(1, 1, 0.5), 1.0), ValidationError);
  }

  TEST_CASE("feedback bounds on resolvent, input and output maps") {
    std::mt19937_64 rng(21);
    int violations = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const PassiveSystem sys = random_passive_system(5, 2, rng);
      const double c = 0.5;
      CMatrix Q = CMatrix::Identity(2, 2) * c;
      Q(0, 1) = Complex(0.3, 0.2);
      Q(1, 0) = Complex(-0.3, 0.2);  // skew-Hermitian off-diagonal keeps Re Q = c I
      const ComplexPassiveSystem sq = feedback_transform(to_complex(sys), Q, c);
      CHECK(verify_passivity(sq, 50, trial).passive());
      for (double s : {0.0, 0.5, 2.0, 10.0, 100.0}) {
        const FeedbackNorms f = feedback_norms(sq, s);
        const double tol = 1e-10 * std::max(1.0, f.resolvent);
        if (f.resolvent_B * f.resolvent_B > f.resolvent / c + tol) ++violations;
        if (f.C_resolvent * f.C_resolvent > f.resolvent / c + tol) ++violations;
        if (f.transfer > 1.0 / c + 1e-10) ++violations;
      }
    }
    CHECK(violations == 0);
  }

  TEST_CASE("coupling collapses to the plain interconnection for D = 0") {
    std::mt19937_64 rng(4);
    const PassiveSystem s1 = random_passive_system(3, 1, rng, false);
    const PassiveSystem s2 = random_passive_system(2, 1, rng, false);
    const DiscreteGenerator g = couple_systems(s1, s2);
    CHECK((g.A.topLeftCorner(3, 3) - s1.A).norm() < 1e-14);
    CHECK((g.A.topRightCorner(3, 2) - s1.B * s2.C).norm() < 1e-14);
    CHECK((g.A.bottomLeftCorner(2, 3) + s2.B * s1.C).norm() < 1e-14);
    CHECK((g.A.bottomRightCorner(2, 2) - s2.A).norm() < 1e-14);
    CHECK(g.dissipativity() <= 1e-10);
  }

  TEST_CASE("coupling with feedthrough on both sides stays dissipative") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const PassiveSystem s1 = random_passive_system(4, 2, rng);
      const PassiveSystem s2 = random_passive_system(3, 2, rng);
      const DiscreteGenerator g = couple_systems(s1, s2);
      CHECK(g.dissipativity() <= 1e-10 * std::max(1.0, (g.gram * g.A).cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("Routh-Hurwitz cases") {
    CHECK(routh_hurwitz(std::vector<double>{1, 1, 1}));
    CHECK_FALSE(routh_hurwitz(std::vector<double>{1, -1, 1}));
    CHECK_FALSE(routh_hurwitz(std::vector<double>{1, 1, 1, 2}));
    CHECK(routh_hurwitz(std::vector<double>{1, 3}));
    CHECK_THROWS_AS(routh_hurwitz(std::vector<double>{1, 1, 1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(routh_hurwitz(std::vector<double>{2, 1, 1}), ValidationError);
    const CVector r = companion_roots(std::vector<double>{1, 1, 1, 2});
    CHECK((r.real().array() > 0.0).any());
  }

  TEST_CASE("Routh-Hurwitz agrees with companion roots on random polynomials") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int disagreements = 0;
    for (int i = 0; i < 1000; ++i) {
      const int degree = 2 + i % 2;
      std::vector<double> c{1.0};
      for (int k = 0; k < degree; ++k) c.push_back(u(rng));
      const CVector roots = companion_roots(c);
      const double max_re = roots.real().maxCoeff();
      if (std::abs(max_re) < 1e-9) continue;  // boundary cases are not decidable numerically
      if (routh_hurwitz(c) != (max_re < 0.0)) ++disagreements;
    }
    CHECK(disagreements == 0);
  }

  TEST_CASE("coupled resolvent bound for two scalar blocks") {
    const PassiveSystem t = nacelle_block(ModelKind::torque, BlockParameters{});
    const PassiveSystem s = scalar(-2.0, 1.0, 1.0, 0.0);
    std::vector<double> grid;
    for (int i = 0; i < 100; ++i) grid.push_back(0.1 * std::pow(1000.0, i / 99.0));
    const CouplingBoundReport rep =
        check_coupled_resolvent_bound(t, s, Matrix::Constant(1, 1, 1.0), 1.0, grid);
    CHECK(rep.excluded.empty());
    CHECK(rep.max_ratio <= 10.0);
    CHECK(rep.max_ratio > 0.0);
  }

  TEST_CASE("lossless second block is excluded where eta vanishes") {
    const PassiveSystem t = nacelle_block(ModelKind::torque, BlockParameters{});
    const PassiveSystem l = scalar(0.0, 1.0, 1.0, 0.0);  // integrator, H(is) = 1/(is)
    std::vector<double> grid{0.5, 1.0, 2.0};
    const CouplingBoundReport rep =
        check_coupled_resolvent_bound(t, l, Matrix::Constant(1, 1, 1.0), 1.0, grid);
    CHECK(rep.excluded.size() == 3);
    CHECK(rep.points.empty());
  }
}
