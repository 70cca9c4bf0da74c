#include "collapse/pointer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "collapse/error.hpp"

namespace collapse::pointer {

double riccati_source(const ProbeParams& params) {
  return params.lambda * params.M * params.omega_G * params.omega_G / params.hbar();
}

Complex riccati_rhs(Complex a, double hbar, double M, double source) {
  if (!(a.real() > 0.0))
    throw Error(ErrorKind::collapsed_width, "Re(a) must be positive, got " + std::to_string(a.real()));
  return Complex(0.0, -2.0 * hbar / M) * a * a + source;
}

Complex riccati_rhs(Complex a, const ProbeParams& params) {
  return riccati_rhs(a, params.hbar(), params.M, riccati_source(params));
}

Complex riccati_fixed_point(double hbar, double M, double source) {
  // a^2 = -i source M / (2 hbar); the root with positive real part has arg -pi/4.
  const double modulus = std::sqrt(source * M / (2.0 * hbar));
  return std::polar(modulus, -0.25 * std::numbers::pi);
}

EquilibriumWidth equilibrium_width(const ProbeParams& params) {
  EquilibriumWidth w;
  w.a_inf = riccati_fixed_point(params.hbar(), params.M, riccati_source(params));
  w.sigma_inf_sq = 0.25 / w.a_inf.real();
  w.quoted_sigma_sq = 2.0 * params.hbar() / (params.M * params.omega_G * std::sqrt(params.lambda));
  w.ratio_to_quoted = w.sigma_inf_sq / w.quoted_sigma_sq;
  return w;
}

Complex riccati_step(Complex a, double dt, const ProbeParams& params) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  const double stiffness = 4.0 * params.hbar() * std::abs(a) / params.M;
  if (dt * stiffness > 0.5)
    throw Error(ErrorKind::step_size, "width dynamics too stiff for dt=" + std::to_string(dt) +
                                          "; use dt < " + std::to_string(0.5 / stiffness));
  const Complex mid = a + 0.5 * dt * riccati_rhs(a, params);
  const Complex next = a + dt * riccati_rhs(mid, params);
  if (!(next.real() > 0.0) || !std::isfinite(next.real()) || !std::isfinite(next.imag()))
    throw Error(ErrorKind::step_size, "width became non-positive; reduce dt below " + std::to_string(dt));
  return next;
}

GaussianPointerState equilibrium_state(const ProbeParams& params, const Vec3& xbar, const Vec3& pbar) {
  GaussianPointerState s;
  s.xbar = xbar;
  s.pbar = pbar;
  s.a.fill(equilibrium_width(params).a_inf);
  return s;
}

namespace {

// Exact free evolution over tau: da/dt = -(2 i hbar / M) a^2.
AxisGaussian free_flight(AxisGaussian s, double tau, const ProbeParams& params) {
  s.xbar += s.pbar / params.M * tau;
  s.a = s.a / (1.0 + Complex(0.0, 2.0 * params.hbar() * tau / params.M) * s.a);
  return s;
}

}  // namespace

AxisGaussian evolve_gaussian_axis(const AxisGaussian& state, double dt, double dW,
                                  const ProbeParams& params) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  if (!(state.a.real() > 0.0)) throw Error(ErrorKind::collapsed_width, "Re(a) must stay positive");
  AxisGaussian s = free_flight(state, 0.5 * dt, params);
  s.a += riccati_source(params) * dt;
  s.xbar += dW / (2.0 * params.hbar() * s.a.real());
  s.pbar -= s.a.imag() / s.a.real() * dW;
  return free_flight(s, 0.5 * dt, params);
}

GaussianPointerState evolve_gaussian(const GaussianPointerState& state, double dt, const Vec3& dW,
                                     const ProbeParams& params) {
  GaussianPointerState next;
  for (int k = 0; k < 3; ++k) {
    const auto axis = evolve_gaussian_axis({state.xbar[k], state.pbar[k], state.a[k]}, dt, dW[k], params);
    next.xbar[k] = axis.xbar;
    next.pbar[k] = axis.pbar;
    next.a[k] = axis.a;
  }
  return next;
}

GridSpec default_grid(const ProbeParams& params, std::size_t n, double widths) {
  return {n, widths * std::sqrt(params.sigma_inf_sq) / static_cast<double>(n)};
}

GridWavefunction equilibrium_on_grid(const ProbeParams& params, const GridSpec& grid, double xbar,
                                     double pbar) {
  return gaussian_on_grid(grid.n, grid.dx, xbar, xbar, pbar, equilibrium_width(params).a_inf,
                          params.hbar());
}

void check_tracked_domain(const GridWavefunction& wf, const GridMoments& m) {
  const double margin = 5.0 * std::sqrt(m.sigma_sq);
  if (!std::isfinite(m.xbar) || m.xbar - margin < wf.x0 || m.xbar + margin > wf.x0 + wf.length())
    throw Error(ErrorKind::domain_escape,
                "state at <x>=" + std::to_string(m.xbar) + " with sigma=" +
                    std::to_string(std::sqrt(m.sigma_sq)) + " does not fit the window [" +
                    std::to_string(wf.x0) + ", " + std::to_string(wf.x0 + wf.length()) + "]");
}

GridSseStepper::GridSseStepper(const ProbeParams& params, const GridSpec& grid, double dt)
    : params_(params), dt_(dt), half_(grid.n, grid.dx, 0.5 * dt, params.M, params.hbar()) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
}

StepDiagnostics GridSseStepper::step(GridWavefunction& wf, double dW) const {
  StepDiagnostics diag;
  half_.apply(wf);

  GridMoments m = position_moments(wf);
  if (std::abs(m.xbar - wf.center()) > 0.125 * wf.length()) {
    recenter(wf, m.xbar);
    m = position_moments(wf);
  }
  check_tracked_domain(wf, m);

  const double kappa = params_.collapse_strength();
  const double noise = dW / params_.hbar();
  const double damping = 2.0 * kappa * dt_;
  for (std::size_t i = 0; i < wf.size(); ++i) {
    const double u = wf.x(i) - m.xbar;
    wf.amplitudes[i] *= std::exp(-damping * u * u + noise * u);
  }
  half_.apply(wf);

  const double norm = norm_sq(wf);
  diag.norm_drift = norm / m.norm - 1.0;
  // E[exp(-4 kappa dt u^2 + 2 s u)] for u ~ N(0, sigma^2), exact for Gaussian states.
  const double q = 1.0 + 8.0 * kappa * dt_ * m.sigma_sq;
  const double log_pred = 2.0 * noise * noise * m.sigma_sq / q - 0.5 * std::log(q);
  diag.predicted_drift = std::expm1(log_pred);
  diag.moments = m;
  if (!std::isfinite(norm) || std::abs(std::log1p(diag.norm_drift) - log_pred) > kMaxUnexplainedDrift)
    throw Error(ErrorKind::instability, "norm drift " + std::to_string(diag.norm_drift) +
                                            " in one step (Ito prediction " +
                                            std::to_string(diag.predicted_drift) + ")");
  normalize(wf);
  return diag;
}

GridWavefunction evolve_grid_sse(GridWavefunction wf, double dt, double dW, const ProbeParams& params,
                                 double xbar_ref) {
  if (std::abs(xbar_ref - wf.center()) > 0.125 * wf.length()) recenter(wf, xbar_ref);
  GridSseStepper stepper(params, {wf.size(), wf.dx}, dt);
  stepper.step(wf, dW);
  return wf;
}

}  // namespace collapse::pointer
