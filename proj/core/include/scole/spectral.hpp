#pragma once

#include <span>
#include <vector>

#include "scole/generator.hpp"
#include "scole/linalg.hpp"

namespace scole {

/// Resolvent of a generator in its energy norm. The Cholesky factor and the
/// similarity transform U A U^{-1} are computed once and shared read-only.
class ResolventEvaluator {
 public:
  explicit ResolventEvaluator(const DiscreteGenerator& gen);

  /// |R(is, A)| in the energy norm; throws SpectrumHit.
  double norm(double s) const;
  const CMatrix& energy_generator() const { return a_hat_; }

 private:
  CMatrix a_hat_;
};

double resolvent_norm(const DiscreteGenerator& gen, double s);

enum class Spacing { log, linear };

std::vector<double> frequency_grid(double lo, double hi, int n_points, Spacing spacing);

struct ScanOptions {
  double s_lo = 2.0;
  double s_hi = 100.0;
  int n_points = 200;
  Spacing spacing = Spacing::log;
  /// Fit window; a non-positive bound defaults to the scan range.
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  /// Add the damped eigenfrequencies inside the range to the grid so that the
  /// resonance peaks are sampled.
  bool refine_resonances = true;
  int threads = 1;
};

struct ResolventScan {
  std::vector<double> s_values;
  std::vector<double> norms;
  std::vector<double> excluded;  ///< spectrum hits
  double window_lo = 0.0;
  double window_hi = 0.0;
  /// Slope of log |R| vs log s through the local maxima (resonance peaks) in the
  /// window, or through all window points when fewer than three maxima exist.
  /// Samples adjacent to a spectrum hit are not counted as maxima.
  double alpha_fit = 0.0;
  /// Plain least-squares slope through every window point.
  double alpha_raw = 0.0;
  int envelope_points = 0;
};

ResolventScan scan_resolvent(const DiscreteGenerator& gen, const ScanOptions& opts);

/// Envelope and raw slopes of sampled norms on [lo, hi]; fills the fit fields of scan.
void fit_scan(ResolventScan& scan, double lo, double hi);

/// Least-squares slope of log(values) against log(s) for s in [lo, hi].
LineFit fit_power_law(std::span<const double> s, std::span<const double> values, double lo,
                      double hi);

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  double max_real_part = 0.0;
  double s_mesh = 0.0;  ///< largest |Im lambda|
  bool conjugate_paired = true;
  /// (|Im lambda|, |Re lambda|) for eigenvalues with Im lambda > 0.
  std::vector<std::pair<double, double>> spectral_gap_curve;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double asymptotic_slope = 0.0;
  int band_count = 0;
};

/// Dense eigensolve of U A U^{-1}. The asymptotic slope fits log|Re| vs log|Im| over
/// band_lo <= Im lambda <= band_fraction * s_mesh.
SpectrumReport eigen_report(const DiscreteGenerator& gen, double band_lo = 2.0,
                            double band_fraction = 0.5);

struct KernelReport {
  int dimension = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Singular values of the energy-coordinate generator; dimension counts those
/// below tol * sigma_max.
KernelReport kernel_check(const DiscreteGenerator& gen, double tol = 1e-8);

}  // namespace scole
