#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "scole/generator.hpp"
#include "scole/linalg.hpp"

namespace scole {

/// Finite-dimensional impedance-passive block x' = A x + B u, y = C x + D u with
/// energy <x, x'>_gram = x'^* gram x.
template <class Scalar>
struct BasicPassiveSystem {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat A, B, C, D;
  Matrix gram;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }

  /// Checks A n x n, B n x p, C p x n, D p x p and gram n x n symmetric positive definite.
  void validate() const;
};

using PassiveSystem = BasicPassiveSystem<double>;
using ComplexPassiveSystem = BasicPassiveSystem<Complex>;

ComplexPassiveSystem to_complex(const PassiveSystem& sys);

struct PassivityReport {
  /// Smallest sampled value of Re<Cx+Du, u> - Re<Ax+Bu, x>_gram over unit pairs.
  double min_defect = 0.0;
  CVector worst_x;
  CVector worst_u;
  int samples = 0;
  /// lambda_max of the Hermitian part of [[gram A, gram B], [-C, -D]].
  double certificate = 0.0;
  double certificate_tol = 0.0;
  bool sampled_ok = false;
  bool certified = false;
  bool passive() const { return sampled_ok && certified; }
};

/// Seeded random unit pairs plus canonical coordinate pairs, then the global
/// certificate. The certificate tolerance is 1e-10 relative to the block norm.
PassivityReport verify_passivity(const ComplexPassiveSystem& sys, int n_samples,
                                 std::uint64_t seed);
PassivityReport verify_passivity(const PassiveSystem& sys, int n_samples, std::uint64_t seed);

/// Re<Cx+Du, u> - Re<Ax+Bu, x>_gram.
double passivity_defect(const ComplexPassiveSystem& sys, const CVector& x, const CVector& u);

struct TransferSample {
  double s = 0.0;
  CMatrix H;
  double eta = 0.0;  ///< lambda_min((H + H^*) / 2)
};

/// H(is) = C (is - A)^{-1} B + D. Small blocks are solved in extended precision
/// so that Re H keeps its relative accuracy where it vanishes like s^4.
/// Throws SpectrumHit when is is numerically an eigenvalue of A.
TransferSample transfer_function(const ComplexPassiveSystem& sys, double s);
TransferSample transfer_function(const PassiveSystem& sys, double s);

struct EtaBound {
  std::vector<double> s;
  std::vector<double> eta;
  std::vector<double> excluded;  ///< spectrum hits
  double M = 0.0;                ///< largest M with eta(s) >= M / (1 + s^2) on the grid
  double floor = 0.0;            ///< largest constant below eta on the grid
};

EtaBound eta_lower_bound(const PassiveSystem& sys, std::span<const double> s_grid);

/// Output feedback u = -Q y + v: A_Q = A - B Q (I + DQ)^{-1} C, B_Q = B (I + QD)^{-1},
/// C_Q = (I + DQ)^{-1} C, D_Q = (I + DQ)^{-1} D. Requires Re Q >= c I and a well
/// conditioned I + DQ (condition number <= 1e12).
ComplexPassiveSystem feedback_transform(const ComplexPassiveSystem& sys, const CMatrix& Q,
                                        double c);
PassiveSystem feedback_transform(const PassiveSystem& sys, const Matrix& Q, double c);

/// Energy-norm quantities bounded after output feedback with Re Q >= c I:
/// |R B|^2 <= |R| / c, |C R|^2 <= |R| / c and |H| <= 1 / c.
struct FeedbackNorms {
  double resolvent = 0.0;    ///< |R(is, A_Q)|
  double resolvent_B = 0.0;  ///< |R(is, A_Q) B_Q|
  double C_resolvent = 0.0;  ///< |C_Q R(is, A_Q)|
  double transfer = 0.0;     ///< |H_Q(is)|
};
FeedbackNorms feedback_norms(const ComplexPassiveSystem& sys_q, double s);

/// Power-preserving interconnection u1 = -y2, u2 = y1 (Q1 = (I + D1 D2)^{-1},
/// Q2 = (I + D2 D1)^{-1}):
///   [[A1 - B1 D2 Q1 C1,  B1 Q2 C2      ],
///    [-B2 Q1 C1,         A2 - B2 Q1 D1 C2]]
/// with block-diagonal Gram. Throws when I + D1 D2 is singular or the result fails
/// the dissipativity certificate.
DiscreteGenerator couple_systems(const PassiveSystem& sys1, const PassiveSystem& sys2);

/// Hurwitz test for monic real polynomials of degree 1..3, coefficients in
/// descending order {1, a_{n-1}, ..., a_0}.
bool routh_hurwitz(std::span<const double> coeffs);

/// Roots of a monic polynomial (descending coefficients) via its companion matrix.
CVector companion_roots(std::span<const double> coeffs);

struct CouplingBoundPoint {
  double s = 0.0;
  double lhs = 0.0;  ///< |R(is, A)| of the coupled generator
  double rhs = 0.0;  ///< (1 + |R(is, A_K)|)(1 + |R(is, A2)|^2) / eta(s)
  double ratio = 0.0;
};

struct CouplingBoundReport {
  std::vector<CouplingBoundPoint> points;
  std::vector<double> excluded;
  std::vector<std::string> excluded_reason;
  double max_ratio = 0.0;
};

/// Compares the coupled resolvent with the product bound on a grid. A_K is the
/// first system closed by u1 = -K y1. Points where eta <= 0 or any shift hits a
/// spectrum are excluded and listed.
CouplingBoundReport check_coupled_resolvent_bound(const PassiveSystem& sys1,
                                                  const PassiveSystem& sys2, const Matrix& K,
                                                  double c, std::span<const double> s_grid);

/// A = S - B B^T with S skew, C = B^T, Re D >= 0, gram = I. Passive by construction.
PassiveSystem random_passive_system(int n, int p, std::mt19937_64& rng, bool feedthrough = true);

}  // namespace scole
