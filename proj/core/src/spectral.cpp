#include "scole/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "scole/errors.hpp"

namespace scole {

namespace {

Matrix energy_coordinates(const DiscreteGenerator& gen) {
  gen.validate();
  return EnergyFactor(gen.gram).similarity(gen.A);
}

}  // namespace

ResolventEvaluator::ResolventEvaluator(const DiscreteGenerator& gen)
    : a_hat_(energy_coordinates(gen).cast<Complex>()) {}

double ResolventEvaluator::norm(double s) const { return shifted_inverse_norm(a_hat_, s); }

double resolvent_norm(const DiscreteGenerator& gen, double s) {
  return ResolventEvaluator(gen).norm(s);
}

std::vector<double> frequency_grid(double lo, double hi, int n_points, Spacing spacing) {
  if (n_points < 2) throw ValidationError("frequency grid needs at least two points");
  if (!(hi > lo)) throw ValidationError("frequency grid needs s_hi > s_lo");
  if (spacing == Spacing::log && !(lo > 0.0)) {
    throw ValidationError("log spacing requires s_lo > 0");
  }
  std::vector<double> s(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double t = static_cast<double>(i) / (n_points - 1);
    s[i] = spacing == Spacing::log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  s.front() = lo;
  s.back() = hi;
  return s;
}

LineFit fit_power_law(std::span<const double> s, std::span<const double> values, double lo,
                      double hi) {
  if (s.size() != values.size()) throw ValidationError("fit_power_law: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < lo || s[i] > hi) continue;
    if (!(s[i] > 0.0) || !(values[i] > 0.0)) {
      throw ValidationError("fit_power_law: non-positive sample inside the window");
    }
    x.push_back(std::log(s[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 2) throw ValidationError("fit_power_law: fewer than two points in the window");
  return fit_line(x, y);
}

void fit_scan(ResolventScan& scan, double lo, double hi) {
  scan.window_lo = lo;
  scan.window_hi = hi;
  scan.alpha_raw = fit_power_law(scan.s_values, scan.norms, lo, hi).slope;

  // A spectrum hit is larger than anything resolvable, so a sample next to one is
  // a shoulder of an unresolved peak rather than a maximum.
  std::vector<double> hits = scan.excluded;
  std::sort(hits.begin(), hits.end());
  auto hit_between = [&](double a, double b) {
    auto it = std::upper_bound(hits.begin(), hits.end(), a);
    return it != hits.end() && *it < b;
  };

  std::vector<double> ps, pn;
  const auto& s = scan.s_values;
  const auto& r = scan.norms;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] < lo || s[i] > hi) continue;
    if (hit_between(s[i - 1], s[i]) || hit_between(s[i], s[i + 1])) continue;
    if (r[i] >= r[i - 1] && r[i] >= r[i + 1]) {
      ps.push_back(s[i]);
      pn.push_back(r[i]);
    }
  }
  if (ps.size() >= 3) {
    scan.alpha_fit = fit_power_law(ps, pn, lo, hi).slope;
    scan.envelope_points = static_cast<int>(ps.size());
  } else {
    scan.alpha_fit = scan.alpha_raw;
    scan.envelope_points = 0;
  }
}

ResolventScan scan_resolvent(const DiscreteGenerator& gen, const ScanOptions& opts) {
  if (opts.threads < 1) throw ValidationError("threads must be >= 1");
  std::vector<double> grid = frequency_grid(opts.s_lo, opts.s_hi, opts.n_points, opts.spacing);
  const ResolventEvaluator eval(gen);

  if (opts.refine_resonances) {
    Eigen::ComplexEigenSolver<CMatrix> es(eval.energy_generator(), false);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed during scan refinement");
    for (const Complex& lam : es.eigenvalues()) {
      if (lam.imag() > opts.s_lo && lam.imag() < opts.s_hi) grid.push_back(lam.imag());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  const std::size_t n = grid.size();
  std::vector<std::optional<double>> values(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      try {
        values[i] = eval.norm(grid[i]);
      } catch (const SpectrumHit&) {
        values[i].reset();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::min<int>(opts.threads, static_cast<int>(n)));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ResolventScan scan;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i]) {
      scan.s_values.push_back(grid[i]);
      scan.norms.push_back(*values[i]);
    } else {
      scan.excluded.push_back(grid[i]);
    }
  }
  const double lo = opts.fit_lo > 0.0 ? opts.fit_lo : opts.s_lo;
  const double hi = opts.fit_hi > 0.0 ? opts.fit_hi : opts.s_hi;
  if (scan.s_values.size() >= 2) fit_scan(scan, lo, hi);
  return scan;
}

SpectrumReport eigen_report(const DiscreteGenerator& gen, double band_lo, double band_fraction) {
  const Matrix a_hat = energy_coordinates(gen);
  Eigen::EigenSolver<Matrix> es(a_hat, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed for generator '" + gen.model + "'");
  }
  SpectrumReport rep;
  const CVector ev = es.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](Complex x, Complex y) {
    if (x.imag() != y.imag()) return x.imag() < y.imag();
    return x.real() < y.real();
  });
  rep.max_real_part = -std::numeric_limits<double>::infinity();
  for (const Complex& l : rep.eigenvalues) {
    rep.max_real_part = std::max(rep.max_real_part, l.real());
    rep.s_mesh = std::max(rep.s_mesh, std::abs(l.imag()));
  }

  for (const Complex& l : rep.eigenvalues) {
    const double tol = 1e-8 * std::max(1.0, std::abs(l));
    const bool found = std::any_of(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                                   [&](Complex m) { return std::abs(m - std::conj(l)) <= tol; });
    if (!found) {
      rep.conjugate_paired = false;
      break;
    }
  }

  rep.band_lo = band_lo;
  rep.band_hi = band_fraction * rep.s_mesh;
  std::vector<double> x, y;
  for (const Complex& l : rep.eigenvalues) {
    if (l.imag() <= 0.0) continue;
    rep.spectral_gap_curve.emplace_back(l.imag(), std::abs(l.real()));
    if (l.imag() >= rep.band_lo && l.imag() <= rep.band_hi && l.real() != 0.0) {
      x.push_back(std::log(l.imag()));
      y.push_back(std::log(std::abs(l.real())));
    }
  }
  rep.band_count = static_cast<int>(x.size());
  if (x.size() >= 2) rep.asymptotic_slope = fit_line(x, y).slope;
  return rep;
}

KernelReport kernel_check(const DiscreteGenerator& gen, double tol) {
  const Matrix a_hat = energy_coordinates(gen);
  Eigen::BDCSVD<Matrix> svd(a_hat);
  const Vector& sv = svd.singularValues();
  KernelReport rep;
  rep.sigma_max = sv(0);
  rep.sigma_min = sv(sv.size() - 1);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < tol * rep.sigma_max) ++rep.dimension;
  }
  return rep;
}

}  // namespace scole
