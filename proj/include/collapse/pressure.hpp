#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collapse/core.hpp"
#include "collapse/rng.hpp"
#include "collapse/stats.hpp"

namespace collapse::pressure {

/// Thin ideal gas around a heavy rigid ball, k_B = 1.
struct GasConfig {
  double n = 1e-3;
  double m = 1e-3;
  double T_gas = 1.0;
  double M = 1.0;
  double R = 1.0;
  double duration = 1.0;
};

/// Throws invalid_parameter on non-positive fields or m / M > 1e-3.
void validate(const GasConfig& gas);

/// Mean molecular speed sqrt(8 T / (pi m)).
double mean_speed(const GasConfig& gas);
/// Wall collision rate n 4 pi R^2 <v> / 4 of a ball at rest.
double collision_rate(const GasConfig& gas);
/// Rate for a ball moving with V: n pi R^2 <|v - V|>.
double collision_rate(const GasConfig& gas, const Vec3& V);

struct CollisionRecord {
  double time = 0.0;
  /// Outward unit normal at the impact point.
  Vec3 normal = Vec3::UnitX();
  Vec3 molecule_in = Vec3::Zero();
  Vec3 molecule_out = Vec3::Zero();
  /// Ball velocity jump.
  Vec3 dv = Vec3::Zero();
};

/// One elastic molecule impact on a ball moving with velocity V, drawn from
/// the exact impact distribution. For V = 0 the impact point is uniform on the
/// sphere and the inward normal speed is flux-weighted Maxwell (Rayleigh).
CollisionRecord sample_collision(const GasConfig& gas, const Vec3& V, NoiseStream& stream);

struct GasTrajectory {
  /// Ball state right after each event, starting with (0, origin, rest).
  std::vector<double> t;
  std::vector<Vec3> X;
  std::vector<Vec3> V;
  std::vector<CollisionRecord> records;
  std::vector<std::string> warnings;
};

/// Event-driven run over gas.duration: collisions at collision_rate(gas, V)
/// with inertial flight between them.
GasTrajectory simulate_gas_brownian(const GasConfig& gas, std::uint64_t seed,
                                    std::uint64_t trajectory = 0);

/// Time-averaged ball kinetic energy per axis over [t_from, duration].
double kinetic_energy_per_axis(const GasTrajectory& traj, const GasConfig& gas, double t_from);

/// P = M sum |dv| / (4 pi R^2 duration), stderr from equal-duration batches.
/// Throws low_statistics below kMinCollisions records.
inline constexpr std::size_t kMinCollisions = 1000;
stats::Estimate pressure_estimator(const std::vector<CollisionRecord>& records, const GasConfig& gas,
                                   std::size_t batches = 32);

}  // namespace collapse::pressure
