#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "collapse/core.hpp"
#include "collapse/stats.hpp"
#include "collapse/trajectories.hpp"

namespace collapse::emergent {

using trajectories::CentroidState;

enum class NoiseCorrelation { independent, field_kernel };
enum class Feedback { none, mean_field };

struct Probe {
  ProbeParams params;
  CentroidState initial{};
};

struct ProbeEnsembleConfig {
  std::vector<Probe> probes;
  /// Separation used to place a pair and to re-pin it in quasi-static runs.
  double d = 4.0;
  NoiseCorrelation noise_correlation = NoiseCorrelation::independent;
  Feedback feedback = Feedback::mean_field;
  /// Re-pin positions and momenta at the start of every window.
  bool quasi_static = true;
  double window = 0.1;
  std::size_t pairs = 1000;
  /// Lattice resolution for field_kernel noise.
  int nodes_per_diameter = 16;
};

/// Two equal probes at +-d/2 on the x axis, at rest.
ProbeEnsembleConfig make_pair_config(const ProbeParams& params, double d, std::size_t pairs);

/// Semiclassical potential of all probes at r, centroids taken as sharp.
double mean_field_potential(const std::vector<Probe>& probes, const Vec3& r);
double ball_potential(const Vec3& r, const Vec3& center, double M, double R, double G);

/// Emergent force on probe 1 from probe 2: -2 lambda G M1 M2 / d^2 along
/// (x1 - x2) / d. Throws overlap when d < R1 + R2.
Vec3 pair_force(const Vec3& x1, const Vec3& x2, const ProbeParams& params);
Vec3 pair_force(const Vec3& x1, const ProbeParams& p1, const Vec3& x2, const ProbeParams& p2);

/// Per-window observables of a two-probe ensemble, one row per pair.
/// Entries after an overlap abort are NaN.
struct TwoProbeRecords {
  std::vector<double> window_start;
  double window = 0.0;
  /// Time average of 1/d^2 over each window.
  Eigen::MatrixXd inv_d2;
  /// Rate of change of (p1 - p2).e12 / 2, accumulated along the
  /// instantaneous unit separation e12.
  Eigen::MatrixXd relative_drift;
  /// Rate of change of (p1 + p2).e12.
  Eigen::MatrixXd total_drift;
  std::vector<std::optional<double>> abort_time;
  /// Final states of pair 0, for inspection.
  std::vector<CentroidState> final_states;
};

TwoProbeRecords simulate_two_probe(const ProbeEnsembleConfig& config, double T, double dt,
                                   std::uint64_t seed);

/// Per-window ensemble means over surviving pairs.
struct WindowSummary {
  double t = 0.0;
  double d = 0.0;
  stats::Estimate relative_drift;
  stats::Estimate total_drift;
};
std::vector<WindowSummary> summarize_windows(const TwoProbeRecords& records);

struct EffectiveCouplingReport {
  double G_eff = 0.0;
  double std_err = 0.0;
  std::size_t n_trajectories = 0;
  double fit_t0 = 0.0;
  double fit_t1 = 0.0;
  /// The analytic expectation 2 lambda G.
  double target = 0.0;
  double G = 0.0;
  /// Mean total-momentum drift along e12 (zero when momentum is conserved).
  stats::Estimate total_drift;
};

/// Fits relative_drift = -c inv_d2 over all surviving pair-windows and reads
/// the coupling a Newtonian observer would infer, G_eff = c / (M1 M2), with a
/// pair-clustered standard error. The expectation is 2 lambda G.
EffectiveCouplingReport estimate_effective_G(const TwoProbeRecords& records,
                                             const ProbeEnsembleConfig& config);

/// Sampled 6x6 covariance of the stacked per-step forces in field_kernel
/// mode, alongside the exact lattice covariance used to draw them.
struct ForceCorrelation {
  Eigen::MatrixXd sampled;
  Eigen::MatrixXd sampled_stderr;
  Eigen::MatrixXd lattice;
};
ForceCorrelation field_kernel_force_covariance(const ProbeParams& params, double d, double dt,
                                               std::size_t samples, std::uint64_t seed,
                                               int nodes_per_diameter = 16);

}  // namespace collapse::emergent
