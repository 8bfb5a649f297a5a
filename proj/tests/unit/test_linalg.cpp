#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <Eigen/LU>

#include "scole/coefficients.hpp"
#include "scole/errors.hpp"
#include "scole/linalg.hpp"

using namespace scole;

TEST_SUITE("linalg") {
  TEST_CASE("energy factor maps the Gram norm to the Euclidean one") {
    Matrix g(3, 3);
    g << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
    const EnergyFactor U(g);
    const Vector z = Vector::LinSpaced(3, -1.0, 2.0);
    CHECK(U.to_energy(z).squaredNorm() == doctest::Approx(z.dot(g * z)).epsilon(1e-14));
    CHECK((U.from_energy(U.to_energy(z)) - z).norm() < 1e-14);

    Matrix a(3, 3);
    a << 1, 2, 3, 4, 5, 6, 7, 8, 10;
    const Matrix s = U.similarity(a);
    const Matrix expect = U.upper() * a * U.upper().inverse();
    CHECK((s - expect).norm() < 1e-12);
    const Vector v(Vector::Ones(3));
    CHECK(U.dual(v).dot(U.to_energy(z)) == doctest::Approx(v.dot(z)));
  }

  TEST_CASE("energy factor rejects indefinite and asymmetric Grams") {
    Matrix g = Matrix::Identity(2, 2);
    g(1, 1) = -1.0;
    CHECK_THROWS_AS(EnergyFactor{g}, ValidationError);
    g(1, 1) = 1.0;
    g(0, 1) = 0.5;
    CHECK_THROWS_AS(EnergyFactor{g}, ValidationError);
  }

  TEST_CASE("scalar shifted inverse") {
    const CMatrix a = CMatrix::Constant(1, 1, -1.0);
    CHECK(shifted_inverse_norm(a, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(shifted_inverse_norm(a, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    const CMatrix c = CMatrix::Constant(1, 1, Complex(0.0, 3.0));
    CHECK_THROWS_AS(shifted_inverse_norm(c, 3.0), SpectrumHit);
  }

  TEST_CASE("line fit recovers an exact line") {
    std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.count == 4);
  }

  TEST_CASE("hermitian part eigenvalues") {
    CMatrix x(2, 2);
    x << Complex(1, 0), Complex(2, 1), Complex(0, 0), Complex(3, 0);
    // Hermitian part [[1, 1+0.5i], [1-0.5i, 3]]: eigenvalues 2 +- sqrt(1 + 1.25)
    CHECK(max_hermitian_eigenvalue(x) == doctest::Approx(2.0 + 1.5));
    CHECK(min_hermitian_eigenvalue(x) == doctest::Approx(2.0 - 1.5));
  }

  TEST_CASE("coefficient builtins and tables") {
    CHECK(constant_coefficient(2.5)(0.3) == 2.5);
    CHECK(affine_coefficient(1.0, 2.0)(0.25) == doctest::Approx(1.5));
    CHECK(exp_coefficient(2.0, -1.0)(1.0) == doctest::Approx(2.0 * std::exp(-1.0)));

    CoefficientTable t{{0.0, 0.5, 1.0}, {1.0, 3.0, 2.0}};
    const auto f = tabulated_coefficient(t);
    CHECK(f(0.25) == doctest::Approx(2.0));
    CHECK(f(0.75) == doctest::Approx(2.5));
    CHECK(f(1.0) == doctest::Approx(2.0));

    CoefficientTable bad{{0.0, 0.5}, {1.0, 1.0}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
  }

  TEST_CASE("coefficient CSV with header and comments") {
    const auto path = std::filesystem::temp_directory_path() / "scole_coeff_test.csv";
    {
      std::ofstream out(path);
      out << "# density\nx,value\n0,1\n0.5,2\n1,4\n";
    }
    const CoefficientTable t = read_coefficient_csv(path);
    REQUIRE(t.x.size() == 3);
    CHECK(t.value[2] == 4.0);
    {
      std::ofstream out(path);
      out << "x,value\n0,1\n0.5,abc\n1,4\n";
    }
    CHECK_THROWS_WITH_AS(read_coefficient_csv(path), doctest::Contains(":3"), ValidationError);
    std::filesystem::remove(path);
  }
}
