#include "collapse/jumps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "collapse/error.hpp"
#include "collapse/pointer.hpp"

namespace collapse::jumps {

DriftStepper::DriftStepper(const ProbeParams& params, std::size_t n, double dx, double dt)
    : params_(params), dt_(dt), half_(n, dx, 0.5 * dt, params.M, params.hbar()) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  if (!(params.lambda == 0.0)) {
    const double rate = params.collapse_strength() * pointer::equilibrium_width(params).sigma_inf_sq;
    if (rate * dt > 0.1)
      throw Error(ErrorKind::step_size, "dt = " + std::to_string(dt) + " too large for the collapse rate");
  }
}

double DriftStepper::step(GridWavefunction& wf) const {
  half_.apply(wf);
  GridMoments m = position_moments(wf);
  if (std::abs(m.xbar - wf.center()) > 0.125 * wf.length()) {
    recenter(wf, m.xbar);
    m = position_moments(wf);
  }
  pointer::check_tracked_domain(wf, m);
  const double kappa = params_.collapse_strength();
  if (kappa != 0.0) {
    for (std::size_t i = 0; i < wf.size(); ++i) {
      const double u = wf.x(i) - m.xbar;
      wf.amplitudes[i] *= std::exp(-kappa * (u * u - m.sigma_sq) * dt_);
    }
  }
  half_.apply(wf);
  const double norm = norm_sq(wf);
  if (!std::isfinite(norm)) throw Error(ErrorKind::instability, "non-finite norm in drift step");
  const double change = norm / m.norm - 1.0;
  normalize(wf);
  return change;
}

GridWavefunction drift_step(GridWavefunction wf, double dt, const ProbeParams& params) {
  DriftStepper(params, wf.size(), wf.dx, dt).step(wf);
  return wf;
}

double jump_rate(double sigma_sq, const ProbeParams& params) {
  return params.lambda * params.M * params.omega_G * params.omega_G * sigma_sq / params.hbar();
}

double jump_rate(const GridWavefunction& wf, const ProbeParams& params) {
  return jump_rate(position_moments(wf).sigma_sq, params);
}

JumpResult apply_jump(const GridWavefunction& wf) {
  const GridMoments m = position_moments(wf);
  const double sigma = std::sqrt(m.sigma_sq);
  if (!(sigma >= 2.0 * wf.dx))
    throw Error(ErrorKind::resolution, "state width " + std::to_string(sigma) +
                                           " is below two grid cells (dx = " + std::to_string(wf.dx) + ")");
  JumpResult out{wf, 0.0};
  for (std::size_t i = 0; i < wf.size(); ++i) out.wf.amplitudes[i] *= (wf.x(i) - m.xbar) / sigma;
  out.pre_norm = norm_sq(out.wf) / m.norm;
  normalize(out.wf);
  return out;
}

double JumpTrajectory::mean_waiting_time() const {
  if (jump_times.empty()) return std::numeric_limits<double>::infinity();
  return jump_times.back() / static_cast<double>(jump_times.size());
}

namespace {
constexpr double kWidenAt = 7.0;
constexpr std::size_t kMaxJumpGrid = std::size_t{1} << 16;
}  // namespace

JumpTrajectory simulate_jump_trajectory(const GridWavefunction& initial, double T, double dt,
                                        NoiseStream& stream, const ProbeParams& params,
                                        std::size_t stride) {
  if (!(T > 0.0)) throw Error(ErrorKind::invalid_parameter, "T must be positive");
  if (stride == 0) throw Error(ErrorKind::invalid_parameter, "stride must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  GridWavefunction wf = initial;
  normalize(wf);
  auto stepper = std::make_unique<DriftStepper>(params, wf.size(), wf.dx, dt);

  JumpTrajectory out;
  out.times.push_back(0.0);
  out.moments.push_back(moments(wf, params.hbar()));
  double threshold = stream.exponential();
  double integrated = 0.0;
  double rate = jump_rate(wf, params);
  for (std::size_t k = 1; k <= steps; ++k) {
    // Jumps triple the variance of a Gaussian, so widths have long excursions.
    const GridMoments m = position_moments(wf);
    if (kWidenAt * std::sqrt(m.sigma_sq) > 0.5 * wf.length()) {
      if (wf.size() >= kMaxJumpGrid)
        throw Error(ErrorKind::domain_escape, "jump state wider than the largest allowed grid");
      wf = widen(wf, 2);
      stepper = std::make_unique<DriftStepper>(params, wf.size(), wf.dx, dt);
    }
    // Advance by dt, locating every threshold crossing inside the step: the
    // rate is taken linear over the (sub)step, the state is re-propagated to
    // the crossing, jumped there, and the rest of the step is completed.
    const double t0 = static_cast<double>(k - 1) * dt;
    double done = 0.0;
    while (dt - done > 1e-12 * dt) {
      const double h = dt - done;
      GridWavefunction saved = wf;
      if (done == 0.0) stepper->step(wf);
      else DriftStepper(params, wf.size(), wf.dx, h).step(wf);
      const double next_rate = jump_rate(wf, params);
      const double inc = 0.5 * (rate + next_rate) * h;
      if (integrated + inc < threshold) {
        integrated += inc;
        rate = next_rate;
        break;
      }
      // Solve integrated + rate s + (next_rate - rate) s^2 / (2h) = threshold for s in (0, h].
      const double need = threshold - integrated;
      const double curv = 0.5 * (next_rate - rate) / h;
      double s = std::abs(curv) * h < 1e-12 * std::max(rate, 1e-300)
                     ? need / rate
                     : (-rate + std::sqrt(std::max(0.0, rate * rate + 4.0 * curv * need))) / (2.0 * curv);
      s = std::clamp(s, 0.0, h);
      wf = std::move(saved);
      if (s > 0.0) DriftStepper(params, wf.size(), wf.dx, s).step(wf);
      integrated += 0.5 * (rate + jump_rate(wf, params)) * s;
      wf = apply_jump(wf).wf;
      out.jump_times.push_back(t0 + done + s);
      out.integrated_rates.push_back(integrated);
      integrated = 0.0;
      threshold = stream.exponential();
      rate = jump_rate(wf, params);
      done += s;
    }
    const double t = static_cast<double>(k) * dt;
    if (k % stride == 0) {
      out.times.push_back(t);
      out.moments.push_back(moments(wf, params.hbar()));
    }
  }
  out.jump_count = out.jump_times.size();
  out.open_integrated_rate = integrated;
  return out;
}

}  // namespace collapse::jumps
