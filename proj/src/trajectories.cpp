#include "collapse/trajectories.hpp"

#include <cmath>
#include <string>

#include "collapse/error.hpp"
#include "collapse/noise.hpp"
#include "collapse/parallel.hpp"
#include "collapse/rng.hpp"

namespace collapse::trajectories {

namespace {

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  if (!(T > 0.0)) throw Error(ErrorKind::invalid_parameter, "T must be positive");
  const double steps = std::round(T / dt);
  if (steps < 1.0 || std::abs(steps * dt - T) > 1e-9 * T)
    throw Error(ErrorKind::invalid_step, "T must be an integer multiple of dt");
  return static_cast<std::size_t>(steps);
}

}  // namespace

CentroidState step_centroid(const CentroidState& state, double dt, const Vec3& dW,
                            const ProbeParams& params) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  const double beta = 2.0 * params.sigma_inf_sq / params.hbar();
  CentroidState next;
  next.xbar = state.xbar + state.pbar / params.M * dt + beta * dW;
  next.pbar = state.pbar + dW;
  next.t = state.t + dt;
  return next;
}

MomentReport analytic_moments(const ProbeParams& params, double t) {
  if (t < 0.0) throw Error(ErrorKind::invalid_parameter, "t must be non-negative");
  const double M = params.M;
  const double beta = 2.0 * params.sigma_inf_sq / params.hbar();
  const double D = params.D_p;
  MomentReport r;
  r.t = t;
  for (int k = 0; k < 3; ++k) {
    r.var_p[k] = {D * t, 0.0};
    r.var_x[k] = {D * (t * t * t / (3.0 * M * M) + beta * beta * t + beta * t * t / M), 0.0};
    r.cov_xp[k] = {D * (t * t / (2.0 * M) + beta * t), 0.0};
  }
  return r;
}

EnsembleSamples ensemble_samples(const EnsembleOptions& options, const ProbeParams& params) {
  if (options.n < 2) throw Error(ErrorKind::invalid_parameter, "ensemble needs n >= 2");
  if (options.samples < 1) throw Error(ErrorKind::invalid_parameter, "need at least one sample time");
  const std::size_t steps = step_count(options.T, options.dt);
  const double work = static_cast<double>(options.n) * static_cast<double>(steps);
  if (work > options.capacity)
    throw Error(ErrorKind::capacity, "n*T/dt = " + std::to_string(work) + " exceeds the cap " +
                                         std::to_string(options.capacity));

  const std::size_t samples = std::min(options.samples, steps);
  std::vector<std::size_t> at(samples);
  EnsembleSamples out;
  for (std::size_t k = 0; k < samples; ++k) {
    at[k] = (k + 1) * steps / samples;
    out.times.push_back(static_cast<double>(at[k]) * options.dt);
    out.states.emplace_back(static_cast<Eigen::Index>(options.n), 6);
  }

  parallel::for_each_index(options.n, [&](std::size_t i) {
    NoiseStream stream(options.seed, stream_id(purpose::centroid, i));
    CentroidState s = options.initial;
    std::size_t next = 0;
    for (std::size_t step = 1; step <= steps && next < samples; ++step) {
      s = step_centroid(s, options.dt, noise::force_increment(params, options.dt, stream), params);
      if (step == at[next]) {
        auto row = out.states[next].row(static_cast<Eigen::Index>(i));
        row.head<3>() = s.xbar;
        row.tail<3>() = s.pbar;
        ++next;
      }
    }
  });
  return out;
}

std::vector<MomentReport> ensemble_run(const EnsembleOptions& options, const ProbeParams& params) {
  const auto samples = ensemble_samples(options, params);
  std::vector<MomentReport> reports;
  for (std::size_t k = 0; k < samples.times.size(); ++k) {
    const auto& m = samples.states[k];
    MomentReport r;
    r.t = samples.times[k];
    for (int a = 0; a < 3; ++a) {
      std::vector<double> x(m.col(a).data(), m.col(a).data() + m.rows());
      std::vector<double> p(m.col(a + 3).data(), m.col(a + 3).data() + m.rows());
      r.var_x[a] = stats::variance_of(x);
      r.var_p[a] = stats::variance_of(p);
      r.cov_xp[a] = stats::covariance_of(x, p);
    }
    reports.push_back(r);
  }
  return reports;
}

std::vector<MomentReport> ensemble_run(std::size_t n, double T, double dt, std::uint64_t seed,
                                       const ProbeParams& params) {
  EnsembleOptions o;
  o.n = n;
  o.T = T;
  o.dt = dt;
  o.seed = seed;
  return ensemble_run(o, params);
}

stats::Estimate discontinuity_metric(std::size_t n, double T, double dt, std::uint64_t seed,
                                     const ProbeParams& params) {
  const std::size_t steps = step_count(T, dt);
  std::vector<double> per_traj(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    NoiseStream stream(seed, stream_id(purpose::centroid, i));
    CentroidState s;
    double acc = 0.0;
    for (std::size_t step = 0; step < steps; ++step) {
      const CentroidState next =
          step_centroid(s, dt, noise::force_increment(params, dt, stream), params);
      acc += std::abs(next.xbar[0] - s.xbar[0] - s.pbar[0] / params.M * dt);
      s = next;
    }
    per_traj[i] = acc / static_cast<double>(steps);
  });
  return stats::mean_of(per_traj);
}

std::vector<CentroidState> simulate_path(const CentroidState& initial, double T, double dt,
                                         std::uint64_t seed, std::uint64_t trajectory,
                                         const ProbeParams& params, std::size_t stride) {
  const std::size_t steps = step_count(T, dt);
  if (stride == 0) stride = 1;
  NoiseStream stream(seed, stream_id(purpose::centroid, trajectory));
  std::vector<CentroidState> path{initial};
  CentroidState s = initial;
  for (std::size_t step = 1; step <= steps; ++step) {
    s = step_centroid(s, dt, noise::force_increment(params, dt, stream), params);
    if (step % stride == 0 || step == steps) path.push_back(s);
  }
  return path;
}

}  // namespace collapse::trajectories
