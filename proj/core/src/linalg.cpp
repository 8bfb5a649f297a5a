#include "scole/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "scole/errors.hpp"

namespace scole {

double symmetry_defect(const Matrix& x) {
  if (x.rows() != x.cols()) throw ValidationError("symmetry_defect: matrix is not square");
  if (x.size() == 0) return 0.0;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return (x - x.transpose()).cwiseAbs().maxCoeff() / scale;
}

double max_symmetric_eigenvalue(const Matrix& x) {
  const Matrix sym = 0.5 * (x + x.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return es.eigenvalues().maxCoeff();
}

namespace {

Vector hermitian_eigenvalues(const CMatrix& x) {
  const CMatrix herm = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return es.eigenvalues();
}

}  // namespace

double max_hermitian_eigenvalue(const CMatrix& x) { return hermitian_eigenvalues(x).maxCoeff(); }

double min_hermitian_eigenvalue(const CMatrix& x) { return hermitian_eigenvalues(x).minCoeff(); }

SingularRange singular_range(const CMatrix& x) {
  if (x.size() == 0) return {};
  // The realification [[P, -Q], [Q, P]] of P + iQ has every singular value of x
  // twice. Complex BDCSVD in Eigen 3.4 misreports small singular values of
  // sparse block-structured input, the real one does not.
  const auto r = x.rows();
  const auto c = x.cols();
  Matrix real(2 * r, 2 * c);
  real.topLeftCorner(r, c) = x.real();
  real.topRightCorner(r, c) = -x.imag();
  real.bottomLeftCorner(r, c) = x.imag();
  real.bottomRightCorner(r, c) = x.real();
  return singular_range(real);
}

SingularRange singular_range(const Matrix& x) {
  if (x.size() == 0) return {};
  Eigen::BDCSVD<Matrix> svd(x);
  const auto& sv = svd.singularValues();
  return {sv(0), sv(sv.size() - 1)};
}

double condition_number(const CMatrix& x) {
  const SingularRange r = singular_range(x);
  if (r.min <= 0.0) return std::numeric_limits<double>::infinity();
  return r.max / r.min;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit_line: size mismatch");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw ValidationError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ValidationError("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.count = static_cast<int>(x.size());
  return fit;
}

double shifted_inverse_norm(const CMatrix& x, double s) {
  if (x.rows() != x.cols()) throw ValidationError("shifted_inverse_norm: matrix is not square");
  CMatrix shifted = -x;
  shifted.diagonal().array() += Complex(0.0, s);
  const SingularRange r = singular_range(shifted);
  const double eps = std::numeric_limits<double>::epsilon();
  if (!(r.min > 16.0 * eps * r.max)) {
    std::ostringstream os;
    os.precision(17);
    os << "is = i*" << s << " lies in the numerical spectrum (sigma_min = " << r.min
       << ", sigma_max = " << r.max << ")";
    throw SpectrumHit(s, os.str());
  }
  return 1.0 / r.min;
}

EnergyFactor::EnergyFactor(const Matrix& gram) {
  if (gram.rows() != gram.cols()) throw ValidationError("energy Gram is not square");
  if (symmetry_defect(gram) > 1e-12) throw ValidationError("energy Gram is not symmetric");
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw ValidationError("energy Gram is not positive definite");
  upper_ = llt.matrixU();
}

Vector EnergyFactor::to_energy(const Vector& z) const {
  return upper_.triangularView<Eigen::Upper>() * z;
}

Vector EnergyFactor::from_energy(const Vector& y) const {
  return upper_.triangularView<Eigen::Upper>().solve(y);
}

Matrix EnergyFactor::similarity(const Matrix& x) const {
  const Matrix ux = upper_.triangularView<Eigen::Upper>() * x;
  // (U X) U^{-1} = (U^{-T} (U X)^T)^T
  const Matrix t = upper_.transpose().triangularView<Eigen::Lower>().solve(ux.transpose());
  return t.transpose();
}

Matrix EnergyFactor::left(const Matrix& x) const {
  return upper_.triangularView<Eigen::Upper>() * x;
}

Matrix EnergyFactor::right(const Matrix& x) const {
  const Matrix t = upper_.transpose().triangularView<Eigen::Lower>().solve(x.transpose());
  return t.transpose();
}

Vector EnergyFactor::dual(const Vector& v) const {
  return upper_.transpose().triangularView<Eigen::Lower>().solve(v);
}

}  // namespace scole
