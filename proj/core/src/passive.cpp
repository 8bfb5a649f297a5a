#include "scole/passive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "scole/errors.hpp"

namespace scole {

namespace {

using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;

// Blocks up to this size are solved in long double.
constexpr int kExtendedPrecisionLimit = 16;

std::string dims(const char* name, Eigen::Index r, Eigen::Index c) {
  return std::string(name) + " is " + std::to_string(r) + "x" + std::to_string(c);
}

double min_eig_hermitian_part(const CMatrix& h) {
  if (h.rows() == 1) return h(0, 0).real();
  return min_hermitian_eigenvalue(h);
}

}  // namespace

template <class Scalar>
void BasicPassiveSystem<Scalar>::validate() const {
  const auto n = A.rows();
  const auto p = B.cols();
  if (A.cols() != n) throw ValidationError(dims("A", A.rows(), A.cols()) + ", expected square");
  if (B.rows() != n) throw ValidationError(dims("B", B.rows(), B.cols()) + ", rows must match A");
  if (C.rows() != p || C.cols() != n) {
    throw ValidationError(dims("C", C.rows(), C.cols()) + ", expected " + std::to_string(p) + "x" +
                          std::to_string(n));
  }
  if (D.rows() != p || D.cols() != p) {
    throw ValidationError(dims("D", D.rows(), D.cols()) + ", expected " + std::to_string(p) + "x" +
                          std::to_string(p));
  }
  if (gram.rows() != n || gram.cols() != n) {
    throw ValidationError(dims("gram", gram.rows(), gram.cols()) + ", must match A");
  }
  EnergyFactor check(gram);
  (void)check;
}

template struct BasicPassiveSystem<double>;
template struct BasicPassiveSystem<Complex>;

ComplexPassiveSystem to_complex(const PassiveSystem& sys) {
  return {sys.A.cast<Complex>(), sys.B.cast<Complex>(), sys.C.cast<Complex>(),
          sys.D.cast<Complex>(), sys.gram};
}

double passivity_defect(const ComplexPassiveSystem& sys, const CVector& x, const CVector& u) {
  const CVector y = sys.C * x + sys.D * u;
  const CVector ax = sys.A * x + sys.B * u;
  const CMatrix g = sys.gram.cast<Complex>();
  return u.dot(y).real() - x.dot(g * ax).real();
}

PassivityReport verify_passivity(const ComplexPassiveSystem& sys, int n_samples,
                                 std::uint64_t seed) {
  sys.validate();
  if (n_samples < 0) throw ValidationError("verify_passivity: n_samples must be >= 0");
  const int n = sys.state_dim();
  const int p = sys.input_dim();
  const int total = n + p;

  PassivityReport rep;
  rep.min_defect = std::numeric_limits<double>::infinity();
  auto consider = [&](const CVector& xu) {
    const CVector x = xu.head(n);
    const CVector u = xu.tail(p);
    const double d = passivity_defect(sys, x, u);
    ++rep.samples;
    if (d < rep.min_defect) {
      rep.min_defect = d;
      rep.worst_x = x;
      rep.worst_u = u;
    }
  };

  // Canonical pairs: every coordinate, and every sum of two coordinates while cheap.
  for (int i = 0; i < total; ++i) consider(CVector::Unit(total, i));
  if (total <= 64) {
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < total; ++i) {
      for (int j = i + 1; j < total; ++j) {
        consider(r * (CVector::Unit(total, i) + CVector::Unit(total, j)));
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < n_samples; ++k) {
    CVector xu(total);
    for (int i = 0; i < total; ++i) xu(i) = Complex(normal(rng), normal(rng));
    consider(xu / xu.norm());
  }
  rep.sampled_ok = rep.min_defect >= -1e-10;

  // Re<Ax+Bu, x>_gram - Re<Cx+Du, u> = Re w^* W w with W below.
  const CMatrix g = sys.gram.cast<Complex>();
  CMatrix W(total, total);
  W.topLeftCorner(n, n) = g * sys.A;
  W.topRightCorner(n, p) = g * sys.B;
  W.bottomLeftCorner(p, n) = -sys.C;
  W.bottomRightCorner(p, p) = -sys.D;
  rep.certificate = max_hermitian_eigenvalue(W);
  rep.certificate_tol = 1e-10 * std::max(1.0, W.cwiseAbs().maxCoeff());
  rep.certified = rep.certificate <= rep.certificate_tol;
  return rep;
}

PassivityReport verify_passivity(const PassiveSystem& sys, int n_samples, std::uint64_t seed) {
  return verify_passivity(to_complex(sys), n_samples, seed);
}

TransferSample transfer_function(const ComplexPassiveSystem& sys, double s) {
  sys.validate();
  const int n = sys.state_dim();
  TransferSample out;
  out.s = s;
  if (n == 0) {
    out.H = sys.D;
  } else {
    CMatrix shifted = -sys.A;
    shifted.diagonal().array() += Complex(0.0, s);
    shifted_inverse_norm(sys.A, s);  // spectrum hit check
    if (n <= kExtendedPrecisionLimit) {
      LMatrix sl = shifted.cast<LComplex>();
      const LMatrix x = sl.partialPivLu().solve(LMatrix(sys.B.cast<LComplex>()));
      const LMatrix h = sys.C.cast<LComplex>() * x + sys.D.cast<LComplex>();
      out.H = h.cast<Complex>();
    } else {
      out.H = sys.C * shifted.partialPivLu().solve(sys.B) + sys.D;
    }
  }
  out.eta = min_eig_hermitian_part(out.H);
  return out;
}

TransferSample transfer_function(const PassiveSystem& sys, double s) {
  return transfer_function(to_complex(sys), s);
}

EtaBound eta_lower_bound(const PassiveSystem& sys, std::span<const double> s_grid) {
  const ComplexPassiveSystem cs = to_complex(sys);
  EtaBound out;
  out.M = std::numeric_limits<double>::infinity();
  out.floor = std::numeric_limits<double>::infinity();
  for (const double s : s_grid) {
    try {
      const TransferSample t = transfer_function(cs, s);
      out.s.push_back(s);
      out.eta.push_back(t.eta);
      out.M = std::min(out.M, t.eta * (1.0 + s * s));
      out.floor = std::min(out.floor, t.eta);
    } catch (const SpectrumHit&) {
      out.excluded.push_back(s);
    }
  }
  if (out.s.empty()) {
    out.M = 0.0;
    out.floor = 0.0;
  }
  return out;
}

ComplexPassiveSystem feedback_transform(const ComplexPassiveSystem& sys, const CMatrix& Q,
                                        double c) {
  sys.validate();
  const int p = sys.input_dim();
  if (Q.rows() != p || Q.cols() != p) {
    throw ValidationError(dims("Q", Q.rows(), Q.cols()) + ", expected " + std::to_string(p) + "x" +
                          std::to_string(p));
  }
  if (!(c > 0.0)) throw ValidationError("feedback_transform: c must be > 0");
  const double lam = min_eig_hermitian_part(Q);
  if (lam < c - 1e-12 * std::max(1.0, c)) {
    std::ostringstream os;
    os.precision(17);
    os << "feedback_transform: lambda_min(Re Q) = " << lam << " < c = " << c;
    throw ValidationError(os.str());
  }
  const CMatrix I = CMatrix::Identity(p, p);
  const CMatrix idq = I + sys.D * Q;
  const CMatrix iqd = I + Q * sys.D;
  const double cond = std::max(condition_number(idq), condition_number(iqd));
  if (!(cond <= 1e12)) {
    std::ostringstream os;
    os.precision(17);
    os << "feedback_transform: I + DQ is near singular (condition number " << cond << ")";
    throw NumericalError(os.str());
  }
  const CMatrix t1 = idq.partialPivLu().inverse();
  const CMatrix t2 = iqd.partialPivLu().inverse();
  ComplexPassiveSystem out;
  out.A = sys.A - sys.B * Q * t1 * sys.C;
  out.B = sys.B * t2;
  out.C = t1 * sys.C;
  out.D = t1 * sys.D;
  out.gram = sys.gram;
  return out;
}

PassiveSystem feedback_transform(const PassiveSystem& sys, const Matrix& Q, double c) {
  const ComplexPassiveSystem cs = feedback_transform(to_complex(sys), Q.cast<Complex>(), c);
  return {cs.A.real(), cs.B.real(), cs.C.real(), cs.D.real(), cs.gram};
}

FeedbackNorms feedback_norms(const ComplexPassiveSystem& sys_q, double s) {
  sys_q.validate();
  const EnergyFactor U(sys_q.gram);
  const CMatrix u = U.upper().cast<Complex>();
  const CMatrix u_inv = U.upper().inverse().cast<Complex>();
  const CMatrix a_hat = u * sys_q.A * u_inv;
  const int n = sys_q.state_dim();

  FeedbackNorms out;
  out.resolvent = shifted_inverse_norm(a_hat, s);
  CMatrix shifted = -a_hat;
  shifted.diagonal().array() += Complex(0.0, s);
  const CMatrix r = shifted.partialPivLu().solve(CMatrix::Identity(n, n));
  out.resolvent_B = singular_range(CMatrix(r * u * sys_q.B)).max;
  out.C_resolvent = singular_range(CMatrix(sys_q.C * u_inv * r)).max;
  out.transfer = singular_range(CMatrix(sys_q.C * u_inv * r * u * sys_q.B + sys_q.D)).max;
  return out;
}

DiscreteGenerator couple_systems(const PassiveSystem& sys1, const PassiveSystem& sys2) {
  sys1.validate();
  sys2.validate();
  const int p = sys1.input_dim();
  if (sys2.input_dim() != p) {
    throw ValidationError("couple_systems: input dimensions differ (" + std::to_string(p) +
                          " vs " + std::to_string(sys2.input_dim()) + ")");
  }
  const Matrix I = Matrix::Identity(p, p);
  const Matrix m1 = I + sys1.D * sys2.D;
  const Matrix m2 = I + sys2.D * sys1.D;
  const double cond = std::max(condition_number(m1.cast<Complex>()),
                               condition_number(m2.cast<Complex>()));
  if (!(cond < 1e12)) {
    throw NumericalError("couple_systems: I + D1 D2 is singular (condition number " +
                         std::to_string(cond) + ")");
  }
  const Matrix q1 = m1.partialPivLu().inverse();
  const Matrix q2 = m2.partialPivLu().inverse();

  const int n1 = sys1.state_dim();
  const int n2 = sys2.state_dim();
  DiscreteGenerator gen;
  gen.model = "coupled";
  gen.A.resize(n1 + n2, n1 + n2);
  gen.A.topLeftCorner(n1, n1) = sys1.A - sys1.B * sys2.D * q1 * sys1.C;
  gen.A.topRightCorner(n1, n2) = sys1.B * q2 * sys2.C;
  gen.A.bottomLeftCorner(n2, n1) = -sys2.B * q1 * sys1.C;
  gen.A.bottomRightCorner(n2, n2) = sys2.A - sys2.B * q1 * sys1.D * sys2.C;
  gen.gram = Matrix::Zero(n1 + n2, n1 + n2);
  gen.gram.topLeftCorner(n1, n1) = sys1.gram;
  gen.gram.bottomRightCorner(n2, n2) = sys2.gram;
  for (int i = 0; i < n1; ++i) gen.labels.push_back("x1[" + std::to_string(i) + "]");
  for (int i = 0; i < n2; ++i) gen.labels.push_back("x2[" + std::to_string(i) + "]");
  require_dissipative(gen);
  return gen;
}

bool routh_hurwitz(std::span<const double> coeffs) {
  if (coeffs.size() < 2 || coeffs.size() > 4) {
    throw ValidationError("routh_hurwitz: degree must be 1, 2 or 3 (got " +
                          std::to_string(static_cast<int>(coeffs.size()) - 1) + ")");
  }
  if (std::abs(coeffs[0] - 1.0) > 1e-12) throw ValidationError("routh_hurwitz: polynomial is not monic");
  switch (coeffs.size()) {
    case 2:
      return coeffs[1] > 0.0;
    case 3:
      return coeffs[1] > 0.0 && coeffs[2] > 0.0;
    default: {
      const double a2 = coeffs[1], a1 = coeffs[2], a0 = coeffs[3];
      return a2 > 0.0 && a0 > 0.0 && a2 * a1 > a0;
    }
  }
}

CVector companion_roots(std::span<const double> coeffs) {
  if (coeffs.size() < 2) throw ValidationError("companion_roots: degree must be >= 1");
  if (coeffs[0] == 0.0) throw ValidationError("companion_roots: leading coefficient is zero");
  const int deg = static_cast<int>(coeffs.size()) - 1;
  Matrix comp = Matrix::Zero(deg, deg);
  for (int j = 0; j < deg; ++j) comp(0, j) = -coeffs[j + 1] / coeffs[0];
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Matrix> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion_roots: eigensolver failed");
  return es.eigenvalues();
}

namespace {

CMatrix energy_similarity(const Matrix& A, const Matrix& gram) {
  return EnergyFactor(gram).similarity(A).cast<Complex>();
}

}  // namespace

CouplingBoundReport check_coupled_resolvent_bound(const PassiveSystem& sys1,
                                                  const PassiveSystem& sys2, const Matrix& K,
                                                  double c, std::span<const double> s_grid) {
  sys1.validate();
  sys2.validate();
  const int p = sys1.input_dim();
  if (K.rows() != p || K.cols() != p) throw ValidationError("coupling bound: K has wrong size");
  if (min_eig_hermitian_part(K.cast<Complex>()) < c - 1e-12 * std::max(1.0, c)) {
    throw ValidationError("coupling bound: Re K >= c I violated");
  }
  const Matrix idk = Matrix::Identity(p, p) + sys1.D * K;
  const Matrix a_k = sys1.A - sys1.B * K * idk.partialPivLu().solve(sys1.C);
  const DiscreteGenerator coupled = couple_systems(sys1, sys2);

  const CMatrix hat_a = energy_similarity(coupled.A, coupled.gram);
  const CMatrix hat_ak = energy_similarity(a_k, sys1.gram);
  const CMatrix hat_a2 = energy_similarity(sys2.A, sys2.gram);
  const ComplexPassiveSystem cs2 = to_complex(sys2);

  CouplingBoundReport rep;
  for (const double s : s_grid) {
    try {
      const TransferSample t = transfer_function(cs2, s);
      const double eta_tol = 1e-14 * std::max(1.0, t.H.cwiseAbs().maxCoeff());
      if (!(t.eta > eta_tol)) {
        rep.excluded.push_back(s);
        rep.excluded_reason.push_back("eta <= 0");
        continue;
      }
      CouplingBoundPoint pt;
      pt.s = s;
      pt.lhs = shifted_inverse_norm(hat_a, s);
      const double rk = shifted_inverse_norm(hat_ak, s);
      const double r2 = shifted_inverse_norm(hat_a2, s);
      pt.rhs = (1.0 + rk) * (1.0 + r2 * r2) / t.eta;
      pt.ratio = pt.lhs / pt.rhs;
      rep.max_ratio = std::max(rep.max_ratio, pt.ratio);
      rep.points.push_back(pt);
    } catch (const SpectrumHit& hit) {
      rep.excluded.push_back(s);
      rep.excluded_reason.push_back(hit.what());
    }
  }
  return rep;
}

PassiveSystem random_passive_system(int n, int p, std::mt19937_64& rng, bool feedthrough) {
  if (n < 1 || p < 1) throw ValidationError("random_passive_system: n and p must be >= 1");
  std::normal_distribution<double> normal;
  auto draw = [&](int r, int c) {
    Matrix m(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) m(i, j) = normal(rng);
    return m;
  };
  const Matrix g = draw(n, n);
  const Matrix S = 0.5 * (g - g.transpose());
  PassiveSystem sys;
  sys.B = draw(n, p);
  sys.A = S - sys.B * sys.B.transpose();
  sys.C = sys.B.transpose();
  if (feedthrough) {
    const Matrix l = draw(p, p);
    const Matrix w = draw(p, p);
    sys.D = l * l.transpose() / p + 0.5 * (w - w.transpose());
  } else {
    sys.D = Matrix::Zero(p, p);
  }
  sys.gram = Matrix::Identity(n, n);
  return sys;
}

}  // namespace scole
