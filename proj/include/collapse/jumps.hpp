#pragma once

#include <cstddef>
#include <vector>

#include "collapse/core.hpp"
#include "collapse/grid.hpp"
#include "collapse/rng.hpp"

namespace collapse::jumps {

/// Deterministic frictional flow between jumps: kinetic term plus
/// -kappa (u^2 - sigma^2) with u = x - <x>, split as kinetic half step,
/// multiplicative update about the current moments, kinetic half step.
class DriftStepper {
 public:
  DriftStepper(const ProbeParams& params, std::size_t n, double dx, double dt);

  /// Returns the norm change before renormalization.
  double step(GridWavefunction& wf) const;
  double dt() const { return dt_; }

 private:
  ProbeParams params_;
  double dt_;
  KineticPropagator half_;
};

GridWavefunction drift_step(GridWavefunction wf, double dt, const ProbeParams& params);

/// lambda M omega_G^2 sigma^2 / hbar for the state's position variance.
double jump_rate(double sigma_sq, const ProbeParams& params);
double jump_rate(const GridWavefunction& wf, const ProbeParams& params);

/// psi -> (x - <x>) psi / sigma, renormalized. Throws resolution when sigma
/// is below two grid cells.
struct JumpResult {
  GridWavefunction wf;
  /// Norm of (x - <x>) psi / sigma before renormalization.
  double pre_norm = 0.0;
};
JumpResult apply_jump(const GridWavefunction& wf);

struct JumpTrajectory {
  std::vector<double> times;
  std::vector<GridMoments> moments;
  std::vector<double> jump_times;
  /// Integrated rate between consecutive jumps (first one from t = 0).
  std::vector<double> integrated_rates;
  /// Integrated rate since the last jump at the end of the run.
  double open_integrated_rate = 0.0;
  std::size_t jump_count = 0;
  double mean_waiting_time() const;
};

/// Piecewise-deterministic run: drift steps, integrated rate accumulated by
/// the trapezoid rule, a jump whenever it crosses an exponential threshold.
/// Crossings are located inside the step (rate linear over the step) and the
/// state is propagated to that time before jumping.
/// Moments (with spectral pbar) are recorded every `stride` steps from t = 0.
/// The window is zero-padded to twice its size whenever 7 sigma exceeds half
/// of it.
JumpTrajectory simulate_jump_trajectory(const GridWavefunction& initial, double T, double dt,
                                        NoiseStream& stream, const ProbeParams& params,
                                        std::size_t stride = 1);

}  // namespace collapse::jumps
