#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "collapse/core.hpp"
#include "collapse/stats.hpp"

namespace collapse::trajectories {

struct CentroidState {
  Vec3 xbar = Vec3::Zero();
  Vec3 pbar = Vec3::Zero();
  double t = 0.0;
};

/// Second moments per axis at time t. Analytic reports carry zero std_err.
struct MomentReport {
  double t = 0.0;
  std::array<stats::Estimate, 3> var_p{};
  std::array<stats::Estimate, 3> var_x{};
  std::array<stats::Estimate, 3> cov_xp{};
};

/// Euler-Maruyama step of the equilibrium centroid SDE with one shared
/// increment: pbar += dW, xbar += (pbar_old / M) dt + (2 sigma_inf^2 / hbar) dW.
CentroidState step_centroid(const CentroidState& state, double dt, const Vec3& dW,
                            const ProbeParams& params);

/// Exact Ito moments of the centroid SDE started from a sharp state.
MomentReport analytic_moments(const ProbeParams& params, double t);

/// Trajectory-steps above which ensemble_run refuses to start.
inline constexpr double kDefaultCapacity = 2e10;

struct EnsembleOptions {
  std::size_t n = 0;
  double T = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  /// Number of equally spaced sample times in (0, T].
  std::size_t samples = 10;
  double capacity = kDefaultCapacity;
  CentroidState initial{};
};

/// n independent trajectories on disjoint streams; moments at every sample
/// time. Deterministic in (options, params) and independent of worker count.
std::vector<MomentReport> ensemble_run(const EnsembleOptions& options, const ProbeParams& params);

std::vector<MomentReport> ensemble_run(std::size_t n, double T, double dt, std::uint64_t seed,
                                       const ProbeParams& params);

/// Raw ensemble samples: for each sample time a matrix with one row per
/// trajectory and columns (x, y, z, px, py, pz).
struct EnsembleSamples {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> states;
};
EnsembleSamples ensemble_samples(const EnsembleOptions& options, const ProbeParams& params);

/// Mean over trajectories and steps of |dxbar_x - (pbar_x / M) dt|, the
/// per-step departure from inertial flight.
stats::Estimate discontinuity_metric(std::size_t n, double T, double dt, std::uint64_t seed,
                                     const ProbeParams& params);

/// One trajectory recorded every `stride` steps (including t = 0).
std::vector<CentroidState> simulate_path(const CentroidState& initial, double T, double dt,
                                         std::uint64_t seed, std::uint64_t trajectory,
                                         const ProbeParams& params, std::size_t stride = 1);

}  // namespace collapse::trajectories
