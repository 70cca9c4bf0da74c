#pragma once

#include <Eigen/Core>

namespace collapse {

using Vec3 = Eigen::Vector3d;

struct UnitSystem {
  double hbar = 1.0;
  double G = 1.0;
};

/// One rigid homogeneous ball together with every scale derived from it.
///
/// `omega_G` is sqrt(G M / R^3) so that M omega_G^2 x^2 is an energy.
/// `D_p` is the per-axis momentum diffusion coefficient of the collapse
/// force, lambda hbar M omega_G^2, and `sigma_inf_sq` the squared spread of
/// the equilibrium pointer state.
struct ProbeParams {
  double M = 0.0;
  double R = 0.0;
  double lambda = 0.0;
  double omega_G = 0.0;
  double sigma_inf_sq = 0.0;
  double D_p = 0.0;
  double V_R = 0.0;
  UnitSystem units;

  double hbar() const { return units.hbar; }
  double G() const { return units.G; }
  /// Coefficient of (x - xbar)^2 in the collapse damping term, lambda M omega_G^2 / (2 hbar).
  double collapse_strength() const { return lambda * M * omega_G * omega_G / (2.0 * units.hbar); }
};

struct ScaleReport {
  double t_collapse = 0.0;
  double t_osc = 0.0;
  double dt_recommended = 0.0;
  double L_recommended = 0.0;
};

inline constexpr double kDefaultLambda = 0.5;

ProbeParams make_probe_params(double M, double R, double lambda = kDefaultLambda,
                              UnitSystem units = {});

/// Copy of `params` with the collapse switched off (lambda = 0). Used for
/// control runs: free Schroedinger flow, zero jump rate, zero emergent force.
ProbeParams without_collapse(const ProbeParams& params);

ScaleReport characteristic_scales(const ProbeParams& params);

}  // namespace collapse
