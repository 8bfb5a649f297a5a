#include "scole/generator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "scole/errors.hpp"

namespace scole {

int DiscreteGenerator::index_of(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw ValidationError("generator has no coordinate labelled " + label);
  return static_cast<int>(it - labels.begin());
}

double DiscreteGenerator::dissipation(const Vector& z) const {
  double sum = 0.0;
  for (const auto& term : damping) {
    const double c = term.direction.dot(z);
    sum -= term.gain * c * c;
  }
  return sum;
}

Vector DiscreteGenerator::channels(const Vector& z) const {
  Vector out(static_cast<Eigen::Index>(damping.size()));
  for (std::size_t i = 0; i < damping.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = damping[i].direction.dot(z);
  }
  return out;
}

std::vector<std::string> DiscreteGenerator::channel_names() const {
  std::vector<std::string> names;
  names.reserve(damping.size());
  for (const auto& term : damping) names.push_back(term.channel);
  return names;
}

Matrix DiscreteGenerator::undamped() const {
  // A = A_0 - gram^{-1} sum g c c^T, so A_0 adds the terms back.
  Matrix correction = Matrix::Zero(dim(), dim());
  for (const auto& term : damping) {
    correction += term.gain * term.direction * term.direction.transpose();
  }
  return A + gram.llt().solve(correction);
}

double DiscreteGenerator::dissipativity() const { return max_symmetric_eigenvalue(gram * A); }

void DiscreteGenerator::validate() const {
  const int n = dim();
  if (A.rows() != A.cols()) throw ValidationError("generator matrix is not square");
  if (gram.rows() != n || gram.cols() != n) {
    throw ValidationError("Gram dimension does not match the generator");
  }
  if (static_cast<int>(labels.size()) != n) {
    throw ValidationError("generator has " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(n) + " coordinates");
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw ValidationError("duplicate coordinate label " + l);
  }
  for (const auto& term : damping) {
    if (term.direction.size() != n) throw ValidationError("damping direction has wrong size");
    if (term.gain < 0.0) throw ValidationError("negative damping gain on " + term.channel);
  }
  if (load_input.size() != 0 && load_input.size() != n) {
    throw ValidationError("load input has wrong size");
  }
  EnergyFactor check(gram);  // throws on asymmetry or loss of definiteness
  (void)check;
}

std::vector<std::string> beam_labels(int n_elements) {
  const int n_dof = 2 * n_elements;
  std::vector<std::string> labels(2 * n_dof);
  for (int node = 1; node <= n_elements; ++node) {
    std::string x;
    if (node == n_elements) {
      x = "1";
    } else {
      std::ostringstream os;
      os.precision(6);
      os << static_cast<double>(node) / n_elements;
      x = os.str();
    }
    const int i = 2 * (node - 1);
    labels[i] = "w(" + x + ")";
    labels[i + 1] = "w_x(" + x + ")";
    labels[n_dof + i] = "w_t(" + x + ")";
    labels[n_dof + i + 1] = "w_xt(" + x + ")";
  }
  return labels;
}

void require_dissipative(const DiscreteGenerator& gen, double tol) {
  const Matrix ga = gen.gram * gen.A;
  const double scale = std::max(1.0, ga.cwiseAbs().maxCoeff());
  const double lam = max_symmetric_eigenvalue(ga);
  if (lam > tol * scale) {
    std::ostringstream os;
    os.precision(17);
    os << "generator '" << gen.model << "' is not dissipative: lambda_max(sym(gram A)) = " << lam;
    throw NumericalError(os.str());
  }
}

}  // namespace scole
