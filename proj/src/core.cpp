#include "collapse/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "collapse/error.hpp"
#include "collapse/pointer.hpp"

namespace collapse {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_step: return "invalid-step";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::degenerate_kernel: return "degenerate-kernel";
    case ErrorKind::kernel_regularization: return "kernel-regularization";
    case ErrorKind::collapsed_width: return "collapsed-width";
    case ErrorKind::step_size: return "step-size";
    case ErrorKind::domain_escape: return "domain-escape";
    case ErrorKind::instability: return "instability";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::precision: return "precision";
    case ErrorKind::overlap: return "overlap";
    case ErrorKind::low_statistics: return "low-statistics";
    case ErrorKind::regime_violation: return "regime-violation";
  }
  return "unknown";
}

namespace {

void require_positive(double value, const char* field) {
  if (!std::isfinite(value) || value <= 0.0)
    throw Error(ErrorKind::invalid_parameter,
                std::string(field) + " must be positive and finite, got " + std::to_string(value));
}

}  // namespace

ProbeParams make_probe_params(double M, double R, double lambda, UnitSystem units) {
  require_positive(M, "M");
  require_positive(R, "R");
  require_positive(lambda, "lambda");
  require_positive(units.hbar, "hbar");
  require_positive(units.G, "G");

  ProbeParams p;
  p.M = M;
  p.R = R;
  p.lambda = lambda;
  p.units = units;
  p.omega_G = std::sqrt(units.G * M / (R * R * R));
  p.V_R = 4.0 * std::numbers::pi * R * R * R / 3.0;
  p.D_p = lambda * units.hbar * M * p.omega_G * p.omega_G;
  p.sigma_inf_sq = pointer::equilibrium_width(p).sigma_inf_sq;
  return p;
}

ProbeParams without_collapse(const ProbeParams& params) {
  ProbeParams p = params;
  p.lambda = 0.0;
  p.D_p = 0.0;
  p.sigma_inf_sq = std::numeric_limits<double>::infinity();
  return p;
}

ScaleReport characteristic_scales(const ProbeParams& params) {
  if (!(params.M > 0.0 && params.R > 0.0 && params.lambda > 0.0 && params.omega_G > 0.0))
    throw Error(ErrorKind::invalid_parameter, "characteristic_scales needs collapse-enabled params");
  ScaleReport s;
  // Relaxation time of the width towards the pointer state: 1 / |d(rhs)/da| at the fixed point.
  const auto a_inf = pointer::equilibrium_width(params).a_inf;
  s.t_collapse = params.M / (4.0 * params.hbar() * std::abs(a_inf));
  s.t_osc = 1.0 / params.omega_G;
  s.dt_recommended = 0.005 * std::min(s.t_collapse, s.t_osc);
  s.L_recommended = 40.0 * std::sqrt(params.sigma_inf_sq);
  return s;
}

}  // namespace collapse
