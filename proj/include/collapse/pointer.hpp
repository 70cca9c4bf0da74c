#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "collapse/core.hpp"
#include "collapse/grid.hpp"

namespace collapse::pointer {

// Gaussian ansatz psi ~ exp(-a (x - xbar)^2 + i pbar x / hbar) per axis.
//
// Substituting it into the Ito collapse equation
//   d psi = [-(i/hbar) p^2/2M - kappa u^2] psi dt + (u/hbar) dW psi,
//   u = x - <x>,  kappa = lambda M omega_G^2 / (2 hbar),  dW^2 = D_p dt,
// the log-amplitude picks up -kappa u^2 from the damping and another
// -u^2 dW^2 / (2 hbar^2) = -kappa u^2 from the Ito correction of the noise, so
//   da/dt = -(2 i hbar / M) a^2 + 2 kappa = -(2 i hbar / M) a^2 + lambda M omega_G^2 / hbar.
// The linear noise term only moves the centre:
//   dxbar = (pbar/M) dt + dW / (2 hbar Re a),  dpbar = -(Im a / Re a) dW.
// At the fixed point a_inf = |a_inf| e^{-i pi/4} these are exactly
// dpbar = dW and dxbar = (pbar/M) dt + (2 sigma_inf^2 / hbar) dW.

/// Constant term of the Riccati equation, lambda M omega_G^2 / hbar.
double riccati_source(const ProbeParams& params);

Complex riccati_rhs(Complex a, const ProbeParams& params);
Complex riccati_rhs(Complex a, double hbar, double M, double source);

/// Root of riccati_rhs with Re(a) > 0 (the attracting one).
Complex riccati_fixed_point(double hbar, double M, double source);

struct EquilibriumWidth {
  double sigma_inf_sq = 0.0;
  Complex a_inf;
  /// 2 hbar / (M omega_G sqrt(lambda)), the stationary width as usually quoted.
  double quoted_sigma_sq = 0.0;
  double ratio_to_quoted = 0.0;
};

EquilibriumWidth equilibrium_width(const ProbeParams& params);

/// One explicit midpoint step of the Riccati equation. Throws step-size when
/// dt is too large for the local rate and collapsed-width if Re(a) <= 0.
Complex riccati_step(Complex a, double dt, const ProbeParams& params);

struct GaussianPointerState {
  Vec3 xbar = Vec3::Zero();
  Vec3 pbar = Vec3::Zero();
  std::array<Complex, 3> a{};

  double sigma_sq(int axis) const { return 0.25 / a[axis].real(); }
};

GaussianPointerState equilibrium_state(const ProbeParams& params, const Vec3& xbar = Vec3::Zero(),
                                       const Vec3& pbar = Vec3::Zero());

/// Advances centroid and widths by dt given the momentum increment dW of the
/// collapse force on each axis. Strang split: exact free half step, collapse
/// update (a += source dt, then the centroid kick with the updated a), exact
/// free half step; the same splitting as the grid stepper.
GaussianPointerState evolve_gaussian(const GaussianPointerState& state, double dt, const Vec3& dW,
                                     const ProbeParams& params);

/// Single-axis form of evolve_gaussian; the 3D step is three of these.
struct AxisGaussian {
  double xbar = 0.0;
  double pbar = 0.0;
  Complex a;
};
AxisGaussian evolve_gaussian_axis(const AxisGaussian& state, double dt, double dW,
                                  const ProbeParams& params);

/// Grid defaults: 1024 points spanning 40 equilibrium widths.
inline constexpr std::size_t kDefaultGridPoints = 1024;
inline constexpr double kDefaultGridWidths = 40.0;

struct GridSpec {
  std::size_t n = kDefaultGridPoints;
  double dx = 0.0;
};

GridSpec default_grid(const ProbeParams& params, std::size_t n = kDefaultGridPoints,
                      double widths = kDefaultGridWidths);

/// Equilibrium pointer state sampled on a grid centred on xbar.
GridWavefunction equilibrium_on_grid(const ProbeParams& params, const GridSpec& grid,
                                     double xbar = 0.0, double pbar = 0.0);

struct StepDiagnostics {
  /// Norm before renormalization minus one.
  double norm_drift = 0.0;
  /// norm_drift a Gaussian state of the same width would show for the realized increment.
  double predicted_drift = 0.0;
  GridMoments moments;
};

/// Strang-split stepper for the reduced collapse equation on a 1D grid:
/// kinetic half step, multiplicative collapse update about the current <x>,
/// kinetic half step, renormalization.
class GridSseStepper {
 public:
  /// Per-step log-norm change not explained by the Gaussian-state prediction
  /// above which the step is rejected as unstable.
  static constexpr double kMaxUnexplainedDrift = 1e-3;

  GridSseStepper(const ProbeParams& params, const GridSpec& grid, double dt);

  /// One step driven by the momentum increment dW. Recentres the window on
  /// the tracked centroid and enforces the tracked-domain condition.
  StepDiagnostics step(GridWavefunction& wf, double dW) const;

  double dt() const { return dt_; }
  const ProbeParams& params() const { return params_; }

 private:
  ProbeParams params_;
  double dt_;
  KineticPropagator half_;
};

/// Convenience wrapper: one step of GridSseStepper, recentring on xbar_ref.
GridWavefunction evolve_grid_sse(GridWavefunction wf, double dt, double dW,
                                 const ProbeParams& params, double xbar_ref);

/// Throws domain-escape unless <x> lies at least 5 sigma inside both edges.
void check_tracked_domain(const GridWavefunction& wf, const GridMoments& m);

}  // namespace collapse::pointer
