#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "scole/beam_fem.hpp"
#include "scole/errors.hpp"

using namespace scole;

namespace {

// Dense polynomial in t with exact products and integrals over [0, 1].
struct Poly {
  std::vector<double> c;  // c[k] t^k

  Poly operator*(const Poly& o) const {
    Poly r{std::vector<double>(c.size() + o.c.size() - 1, 0.0)};
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
  Poly scaled(double s) const {
    Poly r = *this;
    for (double& v : r.c) v *= s;
    return r;
  }
  Poly derivative() const {
    Poly r{std::vector<double>(std::max<std::size_t>(1, c.size() - 1), 0.0)};
    for (std::size_t k = 1; k < c.size(); ++k) r.c[k - 1] = k * c[k];
    return r;
  }
  double integral01() const {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] / (k + 1.0);
    return s;
  }
};

// Element basis in the local variable t = (x - a) / h.
std::vector<Poly> hermite(double h) {
  return {Poly{{1, 0, -3, 2}}, Poly{{0, h, -2 * h, h}}, Poly{{0, 0, 3, -2}},
          Poly{{0, 0, -h, h}}};
}

// q0 + q1 x + q2 x^2 with x = a + h t.
Poly quadratic_in_t(double q0, double q1, double q2, double a, double h) {
  return Poly{{q0 + q1 * a + q2 * a * a, q1 * h + 2 * q2 * a * h, q2 * h * h}};
}

// Exact assembly by polynomial algebra, clamped node removed.
void exact_matrices(int n, const double rq[3], const double eq[3], Matrix& K, Matrix& M) {
  const double h = 1.0 / n;
  const int all = 2 * (n + 1);
  Matrix Ka = Matrix::Zero(all, all), Ma = Matrix::Zero(all, all);
  for (int e = 0; e < n; ++e) {
    const double a = e * h;
    const auto N = hermite(h);
    const Poly rho = quadratic_in_t(rq[0], rq[1], rq[2], a, h);
    const Poly ei = quadratic_in_t(eq[0], eq[1], eq[2], a, h);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const Poly d2i = N[i].derivative().derivative().scaled(1.0 / (h * h));
        const Poly d2j = N[j].derivative().derivative().scaled(1.0 / (h * h));
        Ka(2 * e + i, 2 * e + j) += (ei * d2i * d2j).integral01() * h;
        Ma(2 * e + i, 2 * e + j) += (rho * N[i] * N[j]).integral01() * h;
      }
    }
  }
  K = Ka.bottomRightCorner(all - 2, all - 2);
  M = Ma.bottomRightCorner(all - 2, all - 2);
}

double smallest_free_eigenvalue(int n) {
  // Largest eigenvalue of the inverse pencil (Mrho, K); the direct pencil loses
  // relative accuracy in its smallest eigenvalue.
  const BeamMatrices b = build_beam_matrices(BeamParameters::uniform(), n);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(b.Mrho, b.K, Eigen::EigenvaluesOnly);
  return 1.0 / es.eigenvalues().maxCoeff();
}

long double rhs_oracle(int k) {
  const long double x = k * std::numbers::pi_v<long double>;
  const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
  return std::sinh(x) / (x * x * x * (std::cosh(x) - sign));
}

}  // namespace

TEST_SUITE("beam_fem") {
  TEST_CASE("curvature energy of x^2 on a single element") {
    const BeamMatrices b = build_beam_matrices(BeamParameters::uniform(), 1);
    REQUIRE(b.n_dof == 2);
    Vector q(2);
    q << 1.0, 2.0;  // w(1) = 1, w_x(1) = 2
    CHECK(q.dot(b.K * q) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(b.tip_disp_index == 0);
    CHECK(b.tip_rot_index == 1);
  }

  TEST_CASE("zero state has zero energy") {
    const BeamMatrices b = build_beam_matrices(BeamParameters::uniform(), 4);
    const Vector z = Vector::Zero(b.n_dof);
    CHECK(z.dot(b.K * z) == 0.0);
    CHECK(z.dot(b.Mrho * z) == 0.0);
    CHECK(evaluate_energy(Vector::Zero(3), Matrix::Identity(3, 3)) == 0.0);
    CHECK(evaluate_energy(Vector::Unit(3, 1), Matrix::Identity(3, 3)) == 0.5);
    CHECK_THROWS_AS(evaluate_energy(Vector::Zero(2), Matrix::Identity(3, 3)), ValidationError);
  }

  TEST_CASE("quadratic coefficients are integrated exactly") {
    const double rq[3] = {1.0, 0.5, 0.75};
    const double eq[3] = {2.0, -0.5, 0.25};
    BeamParameters p;
    p.rho = [&](double x) { return rq[0] + rq[1] * x + rq[2] * x * x; };
    p.EI = [&](double x) { return eq[0] + eq[1] * x + eq[2] * x * x; };
    for (int n : {1, 3, 5}) {
      Matrix K, M;
      exact_matrices(n, rq, eq, K, M);
      const BeamMatrices b = build_beam_matrices(p, n);
      CHECK((b.K - K).cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff());
      CHECK((b.Mrho - M).cwiseAbs().maxCoeff() <= 1e-12 * M.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("matrices are symmetric positive definite") {
    const BeamMatrices b = build_beam_matrices(
        BeamParameters{exp_coefficient(1.0, -0.5), affine_coefficient(2.0, -1.0), 1.0, 1.0}, 12);
    CHECK(symmetry_defect(b.K) <= 1e-12);
    CHECK(symmetry_defect(b.Mrho) <= 1e-12);
    CHECK(Eigen::LLT<Matrix>(b.K).info() == Eigen::Success);
    CHECK(Eigen::LLT<Matrix>(b.Mrho).info() == Eigen::Success);
    const Matrix mf = b.full_mass(2.0, 3.0);
    CHECK(mf(b.tip_disp_index, b.tip_disp_index) - b.Mrho(b.tip_disp_index, b.tip_disp_index) == doctest::Approx(2.0));
    CHECK(mf(b.tip_rot_index, b.tip_rot_index) - b.Mrho(b.tip_rot_index, b.tip_rot_index) == doctest::Approx(3.0));
  }

  TEST_CASE("non-positive coefficients are rejected with a location") {
    BeamParameters p = BeamParameters::uniform();
    p.EI = affine_coefficient(1.0, -2.0);  // negative past x = 0.5
    CHECK_THROWS_WITH_AS(build_beam_matrices(p, 4), doctest::Contains("EI(x="), ValidationError);
    CHECK_THROWS_AS(build_beam_matrices(BeamParameters::uniform(), 0), ValidationError);
    CHECK_THROWS_AS(BeamParameters::uniform(1, 1, 0.0, 1).validate(), ValidationError);
  }

  TEST_CASE("first clamped-free eigenvalue converges at fourth order") {
    // Classical value (1.875104068711961)^4. Fine meshes hit the conditioning of K
    // near 1e-7, so the orders come from coarse meshes.
    const double ref = std::pow(1.875104068711961, 4);
    CHECK(smallest_free_eigenvalue(64) == doctest::Approx(ref).epsilon(1e-8));
    const double e8 = smallest_free_eigenvalue(8) - ref;
    const double e16 = smallest_free_eigenvalue(16) - ref;
    const double e32 = smallest_free_eigenvalue(32) - ref;
    CHECK(e8 > 0.0);
    CHECK(std::log2(e8 / e16) >= 3.5);
    CHECK(std::log2(e16 / e32) >= 3.5);
  }

  TEST_CASE("energy of an interpolated smooth state converges at fourth order") {
    auto w = [](double x) { return std::sin(2.0 * x) * x * x; };
    auto wx = [](double x) { return 2.0 * std::cos(2.0 * x) * x * x + 2.0 * x * std::sin(2.0 * x); };
    BeamParameters p{affine_coefficient(1.0, 1.0), exp_coefficient(1.0, 0.3), 1.0, 1.0};
    std::vector<double> energy;
    for (int n : {4, 8, 16, 32}) {
      const BeamMatrices b = build_beam_matrices(p, n);
      const Vector q = hermite_interpolant(b, w, wx);
      energy.push_back(0.5 * q.dot(b.K * q) + 0.5 * q.dot(b.Mrho * q));
    }
    for (int i = 0; i + 2 < 4; ++i) {
      const double order = std::log2(std::abs(energy[i] - energy[i + 1]) /
                                     std::abs(energy[i + 1] - energy[i + 2]));
      CHECK(order >= 3.5);
    }
  }

  TEST_CASE("multiplier condition on the sample grid") {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
    const BeamParameters p = BeamParameters::uniform();
    const auto zeta = affine_coefficient(0.0, 2.0);

    const Eq1Certificate ok = check_condition_eq1(p, zeta, 0.25, 0.4, grid);
    CHECK(ok.holds);
    CHECK(ok.margin == doctest::Approx(-0.1).epsilon(1e-12));
    for (double v : ok.first) CHECK(v == doctest::Approx(-0.5).epsilon(1e-12));
    for (double v : ok.second) CHECK(v == doctest::Approx(-2.25).epsilon(1e-12));

    const Eq1Certificate tight = check_condition_eq1(p, zeta, 0.25, 0.6, grid);
    CHECK_FALSE(tight.holds);
    CHECK(tight.worst_inequality == 1);

    const Eq1Certificate zero = check_condition_eq1(p, constant_coefficient(0.0), 0.25, 0.4, grid);
    CHECK_FALSE(zero.holds);
    CHECK(zero.first[3] == doctest::Approx(1.5));

    std::vector<double> coarse{0.0, 0.25, 0.5, 0.75, 1.0};
    CHECK_THROWS_AS(check_condition_eq1(p, zeta, 0.25, 0.4, coarse), ValidationError);
    CHECK_THROWS_AS(check_condition_eq1(p, affine_coefficient(1.0, 1.0), 0.25, 0.4, grid),
                    ValidationError);
  }

  TEST_CASE("finite differences are exact for quadratics on uneven grids") {
    std::vector<double> x{0.0, 0.1, 0.15, 0.4, 0.45, 0.7, 0.9, 1.0};
    std::vector<double> f;
    for (double v : x) f.push_back(3.0 - v + 2.0 * v * v);
    const auto d = grid_derivative(x, f);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(d[i] == doctest::Approx(-1.0 + 4.0 * x[i]).epsilon(1e-12));
  }

  TEST_CASE("non-resonance condition against an extended-precision oracle") {
    for (int k = 1; k <= 50; ++k) {
      CHECK(cond_rhs(k) == doctest::Approx(static_cast<double>(rhs_oracle(k))).epsilon(1e-14));
      if (k > 1) CHECK(cond_rhs(k) < cond_rhs(k - 1));
    }
    CHECK(cond_rhs(1) == doctest::Approx(0.029579570134262435).epsilon(1e-14));
    CHECK(check_condition_cond(1.0, 1.0, 1.0, 20, 1e-9).empty());
    const double r3 = static_cast<double>(rhs_oracle(3));
    const auto hits = check_condition_cond(r3, 1.0, 1.0, 20, 1e-12);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == 3);
    CHECK(check_condition_cond(1e6, 1.0, 1.0, 100, 1e-9).empty());
    CHECK_THROWS_AS(check_condition_cond(1.0, 1.0, 1.0, 0, 1e-9), ValidationError);
  }
}
