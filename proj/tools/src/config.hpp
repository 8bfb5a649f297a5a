#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "scole/models.hpp"
#include "scole/spectral.hpp"
#include "scole/timesim.hpp"

namespace scole::cli {

/// Which checks verify-all and check run.
struct CheckToggles {
  bool passivity = true;
  bool dissipation = true;
  bool conditions = true;
  bool kernel = true;
  bool routh_hurwitz = true;
  bool hydraulic_positivity = true;
  bool coupling_bound = true;
  bool growth = true;
  bool spectrum = true;
  bool decay = true;
};

/// Coefficient as written in the config, kept for the report.
struct CoefficientSpec {
  std::string kind = "constant";  // constant, affine, exp, table
  double c0 = 1.0;
  double c1 = 0.0;
  std::filesystem::path table;
  CoefficientFn build(int n_elements) const;
  std::string describe() const;
};

struct RunConfig {
  ModelSpec model;
  CoefficientSpec rho;
  CoefficientSpec EI;

  // Resolvent scan. s_hi <= 0 means half the largest eigenfrequency.
  double s_lo = 2.0;
  double s_hi = 0.0;
  int n_points = 200;
  Spacing spacing = Spacing::log;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  bool refine_resonances = true;
  double alpha_max = 2.4;
  double band_lo = 2.0;
  double band_fraction = 0.5;

  // Simulation. dt <= 0 means 1 / (4 s_mesh); record_every <= 0 picks a stride
  // that keeps about 5000 rows.
  double T = 50.0;
  double dt = 0.0;
  InitialProfile profile = InitialProfile::smooth_modal;
  int k_modes = 12;
  double magnitude = 1.0;
  int record_every = 0;
  double decay_lo = 5.0;
  double decay_hi = 50.0;
  long dissipation_steps = 10000;
  double dissipation_dt = 1e-3;

  // Multiplier condition and non-resonance condition.
  CoefficientSpec zeta{"affine", 0.0, 2.0, {}};
  double epsilon = 0.25;
  double delta = 0.4;
  int k_max = 20;

  // Passivity sampling and the coupling-bound feedback gain.
  int passivity_systems = 100;
  int passivity_samples = 64;
  double coupling_gain = 1.0;
  int coupling_points = 100;

  CheckToggles checks;
  std::uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path output = "scole_out";

  /// Cross-field checks; field-level checks happen while parsing.
  void validate() const;
};

/// Parses a flat YAML mapping. Errors are ValidationError with "source:line: "
/// prefixes. Relative table paths resolve against base_dir.
RunConfig parse_config(const std::string& text, const std::string& source,
                       const std::filesystem::path& base_dir);

/// Reads and parses a file; I/O failures are ValidationError naming the path.
RunConfig load_config(const std::filesystem::path& path, std::string* raw_text = nullptr);

/// Canonical keys with their defaults, as a YAML document.
std::string default_config_yaml();

}  // namespace scole::cli
