#pragma once

#include <span>
#include <vector>

#include "scole/coefficients.hpp"
#include "scole/linalg.hpp"

namespace scole {

/// Tower description: coefficient functions on [0, 1] and the rigid nacelle at x = 1.
struct BeamParameters {
  CoefficientFn rho;  ///< mass density
  CoefficientFn EI;   ///< flexural rigidity
  double m = 1.0;     ///< nacelle mass
  double J = 1.0;     ///< nacelle moment of inertia

  static BeamParameters uniform(double rho = 1.0, double EI = 1.0, double m = 1.0,
                                double J = 1.0);

  /// Checks m, J > 0 and that both coefficient functions are callable.
  void validate() const;
};

/// Mass and stiffness of the clamped beam in C1 piecewise-cubic (Hermite) elements
/// on a uniform mesh. Node i sits at x = i h and carries (w(x_i), w_x(x_i)); node 0
/// is clamped and has no degrees of freedom, so dof 2(i-1) is w(x_i) and dof
/// 2(i-1)+1 is w_x(x_i).
struct BeamMatrices {
  Matrix K;     ///< sum over elements of int EI w'' v''
  Matrix Mrho;  ///< sum over elements of int rho w v
  int tip_disp_index = 0;
  int tip_rot_index = 0;
  int n_dof = 0;
  int n_elements = 0;
  double h = 0.0;

  /// Mrho with the nacelle inertias added on the tip degrees of freedom.
  Matrix full_mass(double m, double J) const;

  double node_position(int node) const { return node * h; }
};

/// Assembles K and Mrho with a 5-point Gauss rule per element. Throws
/// ValidationError naming the offending x if rho or EI is not strictly positive
/// (or not finite) at a quadrature point.
BeamMatrices build_beam_matrices(const BeamParameters& params, int n_elements);

/// Nodal Hermite interpolant of a displacement field given w and w_x.
Vector hermite_interpolant(const BeamMatrices& beam, const CoefficientFn& w,
                           const CoefficientFn& w_x);

/// 1/2 z^T M z.
double evaluate_energy(const Vector& z, const Matrix& gram);

/// Pointwise verification of the multiplier inequalities
///   2(1-eps) rho - (rho zeta)'               < -delta
///   EI [(1-eps) - 2 zeta'] + (EI zeta)' / 2  < -delta
/// on a sample grid.
struct Eq1Certificate {
  CoefficientFn zeta;
  double epsilon = 0.0;
  double delta = 0.0;
  /// max over the grid of (expression + delta), over both inequalities
  double margin = 0.0;
  bool holds = false;
  double worst_x = 0.0;
  int worst_inequality = 0;  ///< 1 or 2
  std::vector<double> first;   ///< first expression on the grid
  std::vector<double> second;  ///< second expression on the grid
};

/// Derivatives are three-point finite differences on the (possibly non-uniform)
/// grid, one-sided at the ends. The grid must be strictly increasing in [0, 1]
/// with at least 8 points, and zeta(0) must vanish.
Eq1Certificate check_condition_eq1(const BeamParameters& params, const CoefficientFn& zeta,
                                   double epsilon, double delta, std::span<const double> grid);

/// Three-point finite-difference derivative of samples f on grid x.
std::vector<double> grid_derivative(std::span<const double> x, std::span<const double> f);

/// sinh(k pi) / ((k pi)^3 (cosh(k pi) - (-1)^k)), evaluated without overflow.
double cond_rhs(int k);

/// Every k in 1..k_max with |J EI / rho - cond_rhs(k)| < tol. An empty result means
/// the non-resonance hypothesis holds up to k_max.
std::vector<int> check_condition_cond(double J, double EI, double rho, int k_max, double tol);

}  // namespace scole
