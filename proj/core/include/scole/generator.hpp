#pragma once

#include <string>
#include <vector>

#include "scole/linalg.hpp"

namespace scole {

/// One term of a quadratic dissipation -gain * (direction^T z)^2. The direction
/// is expressed in state coordinates, so direction^T z is the boundary signal
/// (tip velocity, damper relative velocity, ...) reported as a channel.
struct DampingTerm {
  std::string channel;
  double gain = 0.0;
  Vector direction;
};

/// Semi-discrete generator z' = A z with the energy Gram that defines the state
/// norm. Beam-based generators store the displacement dofs first, then the
/// velocity dofs, then any auxiliary states.
struct DiscreteGenerator {
  std::string model;
  Matrix A;
  Matrix gram;
  std::vector<std::string> labels;
  /// The dissipation claimed by the model: Re<Az, z>_gram = -sum gain (c^T z)^2.
  std::vector<DampingTerm> damping;
  /// Load input direction (hydraulic load torque), empty when not applicable.
  Vector load_input;

  // Beam layout, zero for generators without a beam part.
  int n_dof = 0;
  int n_elements = 0;
  int tip_disp_index = -1;
  int tip_rot_index = -1;

  int dim() const { return static_cast<int>(A.rows()); }

  /// Index of a labelled coordinate; throws ValidationError when absent.
  int index_of(const std::string& label) const;

  /// Model dissipation -sum gain (c^T z)^2.
  double dissipation(const Vector& z) const;

  /// Channel values c^T z in damping-term order.
  Vector channels(const Vector& z) const;
  std::vector<std::string> channel_names() const;

  /// Generator with every damping term removed (gram-skew when the model's
  /// dissipation identity is exact).
  Matrix undamped() const;

  /// lambda_max of the symmetric part of gram * A; <= 0 means dissipative.
  double dissipativity() const;

  /// Dimensions, label uniqueness, Gram symmetry and positive definiteness.
  void validate() const;
};

/// Coordinate labels of a beam with n_elements: w(x), w_x(x) for displacements and
/// w_t(x), w_xt(x) for velocities; x is printed as a short decimal.
std::vector<std::string> beam_labels(int n_elements);

/// Throws ValidationError unless dissipativity() <= tol * max(1, |gram A|).
void require_dissipative(const DiscreteGenerator& gen, double tol = 1e-10);

}  // namespace scole
