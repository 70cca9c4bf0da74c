#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace collapse::checks {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// `scale` multiplies ensemble sizes. Below 1 the statistical tolerances are
/// widened by three standard errors, and the detail says so.
struct CheckOptions {
  double scale = 1.0;
  std::uint64_t seed = 20261018;
};

CheckResult momentum_diffusion(const CheckOptions& opt);
CheckResult coordinate_anomaly(const CheckOptions& opt);
CheckResult pointer_equilibrium(const CheckOptions& opt);
CheckResult ansatz_grid_agreement(const CheckOptions& opt);
CheckResult unraveling_equivalence(const CheckOptions& opt);
CheckResult decoherence_rate(const CheckOptions& opt);
CheckResult field_force_consistency(const CheckOptions& opt);
CheckResult emergent_newton(const CheckOptions& opt);
CheckResult pressure_analogue(const CheckOptions& opt);

/// Runs every subcommand twice in `workdir` (one worker, then three workers,
/// the second run configured from the first run's manifest) and compares the
/// data files byte for byte.
CheckResult reproducibility(const std::filesystem::path& workdir);

/// The criteria exercised by a CLI subcommand's --check.
std::vector<CheckResult> for_subcommand(const std::string& subcommand, const CheckOptions& opt);

}  // namespace collapse::checks
