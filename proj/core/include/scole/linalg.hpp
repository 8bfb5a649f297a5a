#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace scole {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Relative symmetry defect max|X - X^T| / max(1, max|X|).
double symmetry_defect(const Matrix& x);

/// Largest eigenvalue of the symmetric part (X + X^T)/2.
double max_symmetric_eigenvalue(const Matrix& x);

/// Largest eigenvalue of the Hermitian part (X + X^*)/2.
double max_hermitian_eigenvalue(const CMatrix& x);

/// Smallest eigenvalue of the Hermitian part (X + X^*)/2.
double min_hermitian_eigenvalue(const CMatrix& x);

/// Largest and smallest singular values.
struct SingularRange {
  double max = 0.0;
  double min = 0.0;
};
SingularRange singular_range(const CMatrix& x);
SingularRange singular_range(const Matrix& x);

/// 2-norm condition number of a small square matrix (infinity when singular).
double condition_number(const CMatrix& x);

/// Least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  int count = 0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// 1 / sigma_min(is I - X), the 2-norm of the resolvent of X at is. Throws SpectrumHit
/// when sigma_min falls below 16 eps sigma_max, i.e. is is numerically in the spectrum.
double shifted_inverse_norm(const CMatrix& x, double s);

/// Cholesky factor of an energy Gram matrix: gram = U^T U with U upper triangular.
/// Maps between state coordinates z and energy coordinates y = U z, in which the
/// energy inner product becomes the Euclidean one.
class EnergyFactor {
 public:
  explicit EnergyFactor(const Matrix& gram);

  int dim() const { return static_cast<int>(upper_.rows()); }
  const Matrix& upper() const { return upper_; }

  Vector to_energy(const Vector& z) const;
  Vector from_energy(const Vector& y) const;

  /// U X U^{-1}.
  Matrix similarity(const Matrix& x) const;
  /// U X (maps input space into energy coordinates).
  Matrix left(const Matrix& x) const;
  /// X U^{-1} (reads energy coordinates).
  Matrix right(const Matrix& x) const;
  /// U^{-T} v, so that v^T z = (U^{-T} v)^T (U z).
  Vector dual(const Vector& v) const;

 private:
  Matrix upper_;
};

}  // namespace scole
