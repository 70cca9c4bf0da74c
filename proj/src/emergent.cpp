#include "collapse/emergent.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "collapse/coulomb.hpp"
#include "collapse/error.hpp"
#include "collapse/noise.hpp"
#include "collapse/parallel.hpp"
#include "collapse/rng.hpp"

namespace collapse::emergent {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::unique_ptr<noise::BallForceSampler> make_pair_sampler(const ProbeParams& p1, const Vec3& x1,
                                                           const ProbeParams& p2, const Vec3& x2,
                                                           double dt, int npd) {
  const double h = 2.0 * std::min(p1.R, p2.R) / npd;
  const Vec3 lo = (x1 - Vec3::Constant(p1.R)).cwiseMin(x2 - Vec3::Constant(p2.R));
  const Vec3 hi = (x1 + Vec3::Constant(p1.R)).cwiseMax(x2 + Vec3::Constant(p2.R));
  const auto lattice = coulomb::covering_lattice(lo, hi, h, 2);
  std::vector<noise::BallForceOperator> ops{noise::BallForceOperator(lattice, x1, p1),
                                            noise::BallForceOperator(lattice, x2, p2)};
  return std::make_unique<noise::BallForceSampler>(ops, p1, dt);
}

}  // namespace

ProbeEnsembleConfig make_pair_config(const ProbeParams& params, double d, std::size_t pairs) {
  ProbeEnsembleConfig config;
  config.d = d;
  config.pairs = pairs;
  config.probes = {Probe{params, {Vec3(-0.5 * d, 0, 0), Vec3::Zero(), 0.0}},
                   Probe{params, {Vec3(0.5 * d, 0, 0), Vec3::Zero(), 0.0}}};
  return config;
}

double ball_potential(const Vec3& r, const Vec3& center, double M, double R, double G) {
  const double s = (r - center).norm();
  if (s >= R) return -G * M / s;
  return -G * M * (3.0 * R * R - s * s) / (2.0 * R * R * R);
}

double mean_field_potential(const std::vector<Probe>& probes, const Vec3& r) {
  double phi = 0.0;
  for (const auto& p : probes) phi += ball_potential(r, p.initial.xbar, p.params.M, p.params.R, p.params.G());
  return phi;
}

Vec3 pair_force(const Vec3& x1, const ProbeParams& p1, const Vec3& x2, const ProbeParams& p2) {
  const Vec3 sep = x1 - x2;
  const double d = sep.norm();
  if (d < p1.R + p2.R)
    throw Error(ErrorKind::overlap, "probes overlap: d = " + std::to_string(d) + " < R1 + R2 = " +
                                        std::to_string(p1.R + p2.R));
  return -2.0 * p1.lambda * p1.G() * p1.M * p2.M / (d * d * d) * sep;
}

Vec3 pair_force(const Vec3& x1, const Vec3& x2, const ProbeParams& params) {
  return pair_force(x1, params, x2, params);
}

TwoProbeRecords simulate_two_probe(const ProbeEnsembleConfig& config, double T, double dt,
                                   std::uint64_t seed) {
  if (config.probes.size() != 2)
    throw Error(ErrorKind::invalid_parameter, "two-probe simulation needs exactly two probes");
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  if (!(config.window >= dt)) throw Error(ErrorKind::invalid_parameter, "window must be at least dt");
  const auto per_window = static_cast<std::size_t>(std::llround(config.window / dt));
  const auto windows = static_cast<std::size_t>(std::llround(T / config.window));
  if (windows == 0) throw Error(ErrorKind::invalid_parameter, "T shorter than one window");
  if (std::abs(per_window * dt - config.window) > 1e-9 * config.window)
    throw Error(ErrorKind::invalid_step, "window must be an integer multiple of dt");

  const auto& p1 = config.probes[0].params;
  const auto& p2 = config.probes[1].params;
  const CentroidState init1 = config.probes[0].initial;
  const CentroidState init2 = config.probes[1].initial;
  pair_force(init1.xbar, p1, init2.xbar, p2);  // overlap check on the initial placement

  std::unique_ptr<noise::BallForceSampler> sampler;
  if (config.noise_correlation == NoiseCorrelation::field_kernel) {
    if (!config.quasi_static)
      throw Error(ErrorKind::invalid_parameter, "field_kernel noise requires quasi-static windows");
    sampler = make_pair_sampler(p1, init1.xbar, p2, init2.xbar, dt, config.nodes_per_diameter);
  }

  const auto n = config.pairs;
  TwoProbeRecords rec;
  rec.window = config.window;
  for (std::size_t w = 0; w < windows; ++w) rec.window_start.push_back(static_cast<double>(w) * config.window);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(windows);
  rec.inv_d2 = Eigen::MatrixXd::Constant(rows, cols, kNaN);
  rec.relative_drift = Eigen::MatrixXd::Constant(rows, cols, kNaN);
  rec.total_drift = Eigen::MatrixXd::Constant(rows, cols, kNaN);
  rec.abort_time.assign(n, std::nullopt);
  rec.final_states.resize(2);
  const bool feedback = config.feedback == Feedback::mean_field;

  parallel::for_each_index(n, [&](std::size_t i) {
    NoiseStream s1(seed, stream_id(purpose::probe, i, 0));
    NoiseStream s2(seed, stream_id(purpose::probe, i, 1));
    CentroidState a = init1, b = init2;
    for (std::size_t w = 0; w < windows; ++w) {
      if (config.quasi_static) {
        a = init1;
        b = init2;
      }
      double inv_d2 = 0.0, rel = 0.0, tot = 0.0;
      for (std::size_t k = 0; k < per_window; ++k) {
        const Vec3 sep = a.xbar - b.xbar;
        const double d = sep.norm();
        if (d < p1.R + p2.R) {
          rec.abort_time[i] = a.t;
          return;
        }
        const Vec3 e12 = sep / d;
        Vec3 dW1, dW2;
        if (sampler) {
          const Eigen::VectorXd inc = sampler->increments(s1);
          dW1 = inc.head<3>();
          dW2 = inc.tail<3>();
        } else {
          dW1 = noise::force_increment(p1, dt, s1);
          dW2 = noise::force_increment(p2, dt, s2);
        }
        Vec3 f1 = Vec3::Zero();
        if (feedback) f1 = pair_force(a.xbar, p1, b.xbar, p2);
        const Vec3 dp1 = dW1 + f1 * dt;
        const Vec3 dp2 = dW2 - f1 * dt;
        rel += 0.5 * (dp1 - dp2).dot(e12);
        tot += (dp1 + dp2).dot(e12);
        inv_d2 += 1.0 / (d * d);
        a = trajectories::step_centroid(a, dt, dW1, p1);
        b = trajectories::step_centroid(b, dt, dW2, p2);
        a.pbar += f1 * dt;
        b.pbar -= f1 * dt;
      }
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(w);
      rec.inv_d2(r, c) = inv_d2 / static_cast<double>(per_window);
      rec.relative_drift(r, c) = rel / config.window;
      rec.total_drift(r, c) = tot / config.window;
    }
    if (i == 0) rec.final_states = {a, b};
  });
  return rec;
}

std::vector<WindowSummary> summarize_windows(const TwoProbeRecords& records) {
  std::vector<WindowSummary> out;
  for (Eigen::Index w = 0; w < records.inv_d2.cols(); ++w) {
    std::vector<double> rel, tot;
    double inv = 0.0;
    for (Eigen::Index i = 0; i < records.inv_d2.rows(); ++i) {
      if (std::isnan(records.inv_d2(i, w))) continue;
      rel.push_back(records.relative_drift(i, w));
      tot.push_back(records.total_drift(i, w));
      inv += records.inv_d2(i, w);
    }
    if (rel.size() < 2) break;
    WindowSummary s;
    s.t = records.window_start[static_cast<std::size_t>(w)];
    s.d = 1.0 / std::sqrt(inv / static_cast<double>(rel.size()));
    s.relative_drift = stats::mean_of(rel);
    s.total_drift = stats::mean_of(tot);
    out.push_back(s);
  }
  return out;
}

EffectiveCouplingReport estimate_effective_G(const TwoProbeRecords& records,
                                             const ProbeEnsembleConfig& config) {
  if (config.probes.size() != 2)
    throw Error(ErrorKind::invalid_parameter, "coupling fit needs a two-probe config");
  const auto n = static_cast<std::size_t>(records.inv_d2.rows());
  if (n < 100)
    throw Error(ErrorKind::low_statistics,
                "coupling fit needs at least 100 pairs, got " + std::to_string(n));
  const auto& p1 = config.probes[0].params;
  const auto& p2 = config.probes[1].params;

  // Weighted least squares of y = c x, x = -inv_d2, with weights 1/|x|, which
  // reduces to sum(y) / sum(x). Plain least squares would be biased: the kick
  // that drives a pair apart also shrinks inv_d2 within the same window.
  double sx = 0.0, sy = 0.0;
  std::vector<double> pair_totals;
  std::size_t used = 0;
  double last_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (Eigen::Index w = 0; w < records.inv_d2.cols(); ++w) {
      const double x = -records.inv_d2(static_cast<Eigen::Index>(i), w);
      if (std::isnan(x)) break;
      sx += x;
      sy += records.relative_drift(static_cast<Eigen::Index>(i), w);
      pair_totals.push_back(records.total_drift(static_cast<Eigen::Index>(i), w));
      last_t = std::max(last_t, records.window_start[static_cast<std::size_t>(w)] + records.window);
      any = true;
    }
    if (any) ++used;
  }
  if (sx >= 0.0) throw Error(ErrorKind::low_statistics, "no surviving pair windows to fit");
  const double c = sy / sx;
  double meat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double g = 0.0;
    for (Eigen::Index w = 0; w < records.inv_d2.cols(); ++w) {
      const double x = -records.inv_d2(static_cast<Eigen::Index>(i), w);
      if (std::isnan(x)) break;
      g += records.relative_drift(static_cast<Eigen::Index>(i), w) - c * x;
    }
    meat += g * g;
  }
  const double c_err = std::sqrt(meat) / std::abs(sx);

  EffectiveCouplingReport report;
  const double scale = p1.M * p2.M;
  report.G_eff = c / scale;
  report.std_err = c_err / scale;
  report.n_trajectories = used;
  report.fit_t0 = records.window_start.empty() ? 0.0 : records.window_start.front();
  report.fit_t1 = last_t;
  report.G = p1.G();
  report.target = 2.0 * p1.lambda * p1.G();
  report.total_drift = stats::mean_of(pair_totals);
  if (!(report.std_err > 0.0)) report.std_err = std::numeric_limits<double>::min();
  if (report.std_err > 0.5 * std::abs(report.G_eff))
    throw Error(ErrorKind::low_statistics, "coupling fit relative stderr exceeds 50%");
  return report;
}

ForceCorrelation field_kernel_force_covariance(const ProbeParams& params, double d, double dt,
                                               std::size_t samples, std::uint64_t seed,
                                               int nodes_per_diameter) {
  const Vec3 x1(-0.5 * d, 0, 0), x2(0.5 * d, 0, 0);
  pair_force(x1, x2, params);
  const auto sampler = make_pair_sampler(params, x1, params, x2, dt, nodes_per_diameter);
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, samples / 1000));
  const std::size_t per = samples / chunks;
  std::vector<Eigen::MatrixXd> partial(chunks, Eigen::MatrixXd::Zero(6, 6));
  std::vector<Eigen::MatrixXd> partial_sq(chunks, Eigen::MatrixXd::Zero(6, 6));
  parallel::for_each_index(chunks, [&](std::size_t c) {
    NoiseStream stream(seed, stream_id(purpose::check, c));
    for (std::size_t k = 0; k < per; ++k) {
      const Eigen::VectorXd f = sampler->increments(stream) / dt;
      const Eigen::MatrixXd outer = f * f.transpose();
      partial[c] += outer;
      partial_sq[c] += outer.cwiseProduct(outer);
    }
  });
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(6, 6), sum_sq = Eigen::MatrixXd::Zero(6, 6);
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += partial[c];
    sum_sq += partial_sq[c];
  }
  const double total = static_cast<double>(per * chunks);
  ForceCorrelation out;
  out.sampled = sum / total;
  const Eigen::MatrixXd var = sum_sq / total - out.sampled.cwiseProduct(out.sampled);
  out.sampled_stderr = (var / total).cwiseMax(0.0).cwiseSqrt();
  out.lattice = sampler->force_covariance();
  return out;
}

}  // namespace collapse::emergent
