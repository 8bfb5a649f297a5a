#pragma once

#include <filesystem>
#include <functional>
#include <vector>

namespace scole {

/// A coefficient function on [0, 1] (mass density, flexural rigidity, ...).
using CoefficientFn = std::function<double(double)>;

CoefficientFn constant_coefficient(double value);

/// c0 + c1 * x
CoefficientFn affine_coefficient(double c0, double c1);

/// c0 * exp(c1 * x)
CoefficientFn exp_coefficient(double c0, double c1);

/// Samples (x, value) of a coefficient, strictly increasing in x and covering [0, 1].
struct CoefficientTable {
  std::vector<double> x;
  std::vector<double> value;

  void validate() const;
};

/// Piecewise-linear interpolant of a table.
CoefficientFn tabulated_coefficient(CoefficientTable table);

/// Reads "x,value" rows. Blank lines and lines starting with '#' are skipped, as is
/// a non-numeric header row.
CoefficientTable read_coefficient_csv(const std::filesystem::path& path);

}  // namespace scole
