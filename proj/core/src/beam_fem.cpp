#include "scole/beam_fem.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scole/errors.hpp"

namespace scole {

namespace {

// 5-point Gauss-Legendre on [-1, 1]; exact through degree 9.
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
    0.2369268850561891};

struct HermiteBasis {
  std::array<double, 4> value;
  std::array<double, 4> second;  // d^2/dx^2
};

// Local coordinate t in [0, 1] on an element of length h; local dofs are
// (w_left, w_x_left, w_right, w_x_right).
HermiteBasis hermite_basis(double t, double h) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  HermiteBasis b;
  b.value = {1.0 - 3.0 * t2 + 2.0 * t3, h * (t - 2.0 * t2 + t3), 3.0 * t2 - 2.0 * t3,
             h * (t3 - t2)};
  const double ih2 = 1.0 / (h * h);
  b.second = {(-6.0 + 12.0 * t) * ih2, h * (-4.0 + 6.0 * t) * ih2, (6.0 - 12.0 * t) * ih2,
              h * (-2.0 + 6.0 * t) * ih2};
  return b;
}

void require_positive(const char* name, double value, double x) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os.precision(17);
    os << name << "(x=" << x << ") = " << value << " is not strictly positive";
    throw ValidationError(os.str());
  }
}

}  // namespace

BeamParameters BeamParameters::uniform(double rho, double EI, double m, double J) {
  return {constant_coefficient(rho), constant_coefficient(EI), m, J};
}

void BeamParameters::validate() const {
  if (!rho) throw ValidationError("beam parameter rho is not set");
  if (!EI) throw ValidationError("beam parameter EI is not set");
  if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("nacelle mass m must be > 0");
  if (!(J > 0.0) || !std::isfinite(J)) throw ValidationError("nacelle inertia J must be > 0");
}

Matrix BeamMatrices::full_mass(double m, double J) const {
  Matrix M = Mrho;
  M(tip_disp_index, tip_disp_index) += m;
  M(tip_rot_index, tip_rot_index) += J;
  return M;
}

BeamMatrices build_beam_matrices(const BeamParameters& params, int n_elements) {
  if (n_elements < 1) throw ValidationError("n_elements must be >= 1");
  params.validate();

  const double h = 1.0 / n_elements;
  // Global numbering including the clamped node 0; its two dofs are dropped at the end.
  const int n_all = 2 * (n_elements + 1);
  Matrix K = Matrix::Zero(n_all, n_all);
  Matrix M = Matrix::Zero(n_all, n_all);

  for (int e = 0; e < n_elements; ++e) {
    Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d me = Eigen::Matrix4d::Zero();
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
      const double t = 0.5 * (kGaussNodes[q] + 1.0);
      const double x = (e + t) * h;
      const double jw = 0.5 * h * kGaussWeights[q];
      const double rho = params.rho(x);
      const double ei = params.EI(x);
      require_positive("rho", rho, x);
      require_positive("EI", ei, x);
      const HermiteBasis b = hermite_basis(t, h);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          ke(i, j) += ei * b.second[i] * b.second[j] * jw;
          me(i, j) += rho * b.value[i] * b.value[j] * jw;
        }
      }
    }
    K.block<4, 4>(2 * e, 2 * e) += ke;
    M.block<4, 4>(2 * e, 2 * e) += me;
  }

  BeamMatrices out;
  out.n_elements = n_elements;
  out.h = h;
  out.n_dof = n_all - 2;
  out.K = K.bottomRightCorner(out.n_dof, out.n_dof);
  out.Mrho = M.bottomRightCorner(out.n_dof, out.n_dof);
  // Remove the rounding asymmetry of the accumulated products.
  out.K = 0.5 * (out.K + out.K.transpose()).eval();
  out.Mrho = 0.5 * (out.Mrho + out.Mrho.transpose()).eval();
  out.tip_disp_index = out.n_dof - 2;
  out.tip_rot_index = out.n_dof - 1;
  return out;
}

Vector hermite_interpolant(const BeamMatrices& beam, const CoefficientFn& w,
                           const CoefficientFn& w_x) {
  Vector q(beam.n_dof);
  for (int node = 1; node <= beam.n_elements; ++node) {
    const double x = beam.node_position(node);
    q(2 * (node - 1)) = w(x);
    q(2 * (node - 1) + 1) = w_x(x);
  }
  return q;
}

double evaluate_energy(const Vector& z, const Matrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() != z.size()) {
    throw ValidationError("evaluate_energy: state has dimension " + std::to_string(z.size()) +
                          " but the Gram matrix is " + std::to_string(gram.rows()) + "x" +
                          std::to_string(gram.cols()));
  }
  return 0.5 * z.dot(gram * z);
}

std::vector<double> grid_derivative(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  if (n != f.size()) throw ValidationError("grid_derivative: size mismatch");
  if (n < 3) throw ValidationError("grid_derivative: need at least three points");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
           h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] -
           h1 / (h2 * (h1 + h2)) * f[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3];
    const double h2 = x[n - 1] - x[n - 2];
    d[n - 1] = (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1] - (h1 + h2) / (h1 * h2) * f[n - 2] +
               h2 / (h1 * (h1 + h2)) * f[n - 3];
  }
  return d;
}

Eq1Certificate check_condition_eq1(const BeamParameters& params, const CoefficientFn& zeta,
                                   double epsilon, double delta, std::span<const double> grid) {
  if (!params.rho || !params.EI) throw ValidationError("check_condition_eq1: rho/EI not set");
  if (!zeta) throw ValidationError("check_condition_eq1: zeta not set");
  if (grid.size() < 8) {
    throw ValidationError("check_condition_eq1: grid too coarse (" + std::to_string(grid.size()) +
                          " points, need >= 8)");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > 1.0) throw ValidationError("check_condition_eq1: grid outside [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ValidationError("check_condition_eq1: grid must be strictly increasing");
    }
  }
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw ValidationError("check_condition_eq1: epsilon and delta must be > 0");
  }
  if (std::abs(zeta(0.0)) > 1e-12) throw ValidationError("check_condition_eq1: zeta(0) != 0");

  const std::size_t n = grid.size();
  std::vector<double> rho(n), ei(n), z(n), rho_z(n), ei_z(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = params.rho(grid[i]);
    ei[i] = params.EI(grid[i]);
    z[i] = zeta(grid[i]);
    rho_z[i] = rho[i] * z[i];
    ei_z[i] = ei[i] * z[i];
  }
  const auto dz = grid_derivative(grid, z);
  const auto d_rho_z = grid_derivative(grid, rho_z);
  const auto d_ei_z = grid_derivative(grid, ei_z);

  Eq1Certificate cert;
  cert.zeta = zeta;
  cert.epsilon = epsilon;
  cert.delta = delta;
  cert.first.resize(n);
  cert.second.resize(n);
  cert.margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    cert.first[i] = 2.0 * (1.0 - epsilon) * rho[i] - d_rho_z[i];
    cert.second[i] = ei[i] * ((1.0 - epsilon) - 2.0 * dz[i]) + 0.5 * d_ei_z[i];
    if (cert.first[i] + delta > cert.margin) {
      cert.margin = cert.first[i] + delta;
      cert.worst_x = grid[i];
      cert.worst_inequality = 1;
    }
    if (cert.second[i] + delta > cert.margin) {
      cert.margin = cert.second[i] + delta;
      cert.worst_x = grid[i];
      cert.worst_inequality = 2;
    }
  }
  cert.holds = cert.margin < 0.0;
  return cert;
}

double cond_rhs(int k) {
  if (k < 1) throw ValidationError("cond_rhs: k must be >= 1");
  const double x = k * std::numbers::pi;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
  // sinh(x) / (cosh(x) - sign) = (1 - e^{-2x}) / (1 + e^{-2x} - 2 sign e^{-x})
  const double e1 = std::exp(-x);
  const double e2 = e1 * e1;
  const double ratio = (1.0 - e2) / (1.0 + e2 - 2.0 * sign * e1);
  return ratio / (x * x * x);
}

std::vector<int> check_condition_cond(double J, double EI, double rho, int k_max, double tol) {
  if (!(J > 0.0) || !(EI > 0.0) || !(rho > 0.0)) {
    throw ValidationError("check_condition_cond: J, EI and rho must be > 0");
  }
  if (k_max < 1) throw ValidationError("check_condition_cond: k_max must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("check_condition_cond: tol must be > 0");
  const double lhs = J * EI / rho;
  std::vector<int> hits;
  for (int k = 1; k <= k_max; ++k) {
    if (std::abs(lhs - cond_rhs(k)) < tol) hits.push_back(k);
  }
  return hits;
}

}  // namespace scole
