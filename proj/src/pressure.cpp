#include "collapse/pressure.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "collapse/error.hpp"

namespace collapse::pressure {

namespace {
constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorKind::invalid_parameter, std::string(name) + " must be positive and finite");
}
}  // namespace

void validate(const GasConfig& gas) {
  if (!(gas.n >= 0.0) || !std::isfinite(gas.n))
    throw Error(ErrorKind::invalid_parameter, "n must be non-negative and finite");
  require_positive(gas.m, "m");
  require_positive(gas.T_gas, "T_gas");
  require_positive(gas.M, "M");
  require_positive(gas.R, "R");
  require_positive(gas.duration, "duration");
  if (gas.m / gas.M > 1e-3)
    throw Error(ErrorKind::invalid_parameter,
                "molecule mass ratio m/M = " + std::to_string(gas.m / gas.M) + " exceeds 1e-3");
}

double mean_speed(const GasConfig& gas) { return std::sqrt(8.0 * gas.T_gas / (kPi * gas.m)); }

double collision_rate(const GasConfig& gas) { return gas.n * kPi * gas.R * gas.R * mean_speed(gas); }

double collision_rate(const GasConfig& gas, const Vec3& V) {
  const double a = std::sqrt(2.0 * gas.T_gas / gas.m);
  const double s = V.norm() / a;
  if (s < 1e-4) return collision_rate(gas) * (1.0 + s * s / 3.0);
  const double mean_rel = a * ((s + 0.5 / s) * std::erf(s) + std::exp(-s * s) / std::sqrt(kPi));
  return gas.n * kPi * gas.R * gas.R * mean_rel;
}

CollisionRecord sample_collision(const GasConfig& gas, const Vec3& V, NoiseStream& stream) {
  const double thermal = std::sqrt(gas.T_gas / gas.m);
  const double a = std::sqrt(2.0 * thermal * thermal);
  const double speed = mean_speed(gas);
  const double vnorm = V.norm();
  auto unit = [&stream] {
    const double c = 2.0 * stream.uniform() - 1.0;
    const double phi = 2.0 * kPi * stream.uniform();
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    return Vec3(s * std::cos(phi), s * std::sin(phi), c);
  };
  // Molecule velocity weighted by |v - V|: propose from (|v| + |V|) f(v),
  // a mixture of speed-weighted and plain Maxwell, then thin.
  Vec3 v;
  for (;;) {
    if (stream.uniform() * (speed + vnorm) < speed)
      v = a * std::sqrt(stream.exponential() + stream.exponential()) * unit();
    else
      v = thermal * Vec3(stream.normal(), stream.normal(), stream.normal());
    if (stream.uniform() * (v.norm() + vnorm) < (v - V).norm()) break;
  }
  // Impact parameter uniform over the disk the sphere presents to w.
  const Vec3 w = v - V;
  const Vec3 what = w.normalized();
  const Vec3 helper = std::abs(what.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = what.cross(helper).normalized();
  const Vec3 e2 = what.cross(e1);
  const double r = std::sqrt(stream.uniform());
  const double psi = 2.0 * kPi * stream.uniform();
  CollisionRecord rec;
  rec.normal = (-std::sqrt(std::max(0.0, 1.0 - r * r)) * what + r * (std::cos(psi) * e1 + std::sin(psi) * e2))
                   .normalized();
  const double vn = w.dot(rec.normal);
  const double total = gas.m + gas.M;
  rec.molecule_in = v;
  rec.dv = (2.0 * gas.m / total * vn) * rec.normal;
  rec.molecule_out = v - (2.0 * gas.M / total * vn) * rec.normal;
  return rec;
}

GasTrajectory simulate_gas_brownian(const GasConfig& gas, std::uint64_t seed, std::uint64_t trajectory) {
  validate(gas);
  NoiseStream stream(seed, stream_id(purpose::gas, trajectory));
  const double vbar = mean_speed(gas);
  GasTrajectory out;
  double t = 0.0;
  Vec3 X = Vec3::Zero(), V = Vec3::Zero();
  out.t.push_back(t);
  out.X.push_back(X);
  out.V.push_back(V);
  double max_speed = 0.0;
  if (gas.n > 0.0) {
    for (;;) {
      const double wait = stream.exponential() / collision_rate(gas, V);
      if (t + wait > gas.duration) break;
      t += wait;
      X += V * wait;
      CollisionRecord rec = sample_collision(gas, V, stream);
      rec.time = t;
      V += rec.dv;
      max_speed = std::max(max_speed, V.norm());
      out.records.push_back(rec);
      out.t.push_back(t);
      out.X.push_back(X);
      out.V.push_back(V);
    }
  }
  if (max_speed > 0.1 * vbar)
    out.warnings.push_back("regime violation: ball speed " + std::to_string(max_speed) +
                           " exceeded 0.1 of the mean molecular speed " + std::to_string(vbar));
  return out;
}

double kinetic_energy_per_axis(const GasTrajectory& traj, const GasConfig& gas, double t_from) {
  if (!(t_from < gas.duration)) throw Error(ErrorKind::invalid_parameter, "t_from must precede the end of the run");
  double acc = 0.0;
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    const double start = std::max(traj.t[k], t_from);
    const double end = k + 1 < traj.t.size() ? traj.t[k + 1] : gas.duration;
    if (end > start) acc += traj.V[k].squaredNorm() * (end - start);
  }
  return 0.5 * gas.M * acc / (3.0 * (gas.duration - t_from));
}

stats::Estimate pressure_estimator(const std::vector<CollisionRecord>& records, const GasConfig& gas,
                                   std::size_t batches) {
  if (records.size() < kMinCollisions)
    throw Error(ErrorKind::low_statistics, "pressure estimator needs at least " +
                                               std::to_string(kMinCollisions) + " collisions, got " +
                                               std::to_string(records.size()));
  require_positive(gas.duration, "duration");
  if (batches < 2) throw Error(ErrorKind::invalid_parameter, "need at least two batches");
  const double area = 4.0 * kPi * gas.R * gas.R;
  std::vector<double> per_batch(batches, 0.0);
  double total = 0.0;
  for (const auto& r : records) {
    const double j = r.dv.norm();
    total += j;
    auto b = static_cast<std::size_t>(r.time / gas.duration * static_cast<double>(batches));
    per_batch[std::min(b, batches - 1)] += j;
  }
  const double batch_T = gas.duration / static_cast<double>(batches);
  for (double& p : per_batch) p = gas.M * p / (area * batch_T);
  const auto spread = stats::mean_of(per_batch);
  return {gas.M * total / (area * gas.duration), spread.std_err};
}

}  // namespace collapse::pressure
