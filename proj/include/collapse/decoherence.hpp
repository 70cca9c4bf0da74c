#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "collapse/core.hpp"
#include "collapse/coulomb.hpp"
#include "collapse/stats.hpp"

namespace collapse::decoherence {

struct UniformBall {
  Vec3 center = Vec3::Zero();
  double M = 1.0;
  double R = 1.0;
};

/// Cell densities (mass / length^3) on a regular lattice.
struct LatticeDensity {
  coulomb::Lattice3 lattice;
  std::vector<double> values;
};

using MassDensity = std::variant<UniformBall, LatticeDensity>;

double total_mass(const MassDensity& f);

/// Uniform ball rasterized onto `lattice` with volume-fraction weights.
LatticeDensity voxelize(const UniformBall& ball, const coulomb::Lattice3& lattice);

/// Default relative tolerance for lattice quadrature in dp_norm_sq.
inline constexpr double kNormTolerance = 5e-3;

/// G times the double integral of [f - g](r) [f - g](s) / |r - s|.
///
/// Uniform balls of equal radius use the shell theorem and the tabulated
/// overlap potential; everything else goes through lattice quadrature with the
/// cell-averaged diagonal. Throws precision when the lattice cannot reach
/// `tolerance`.
double dp_norm_sq(const MassDensity& f, const MassDensity& g, const UnitSystem& units = {},
                  double tolerance = kNormTolerance);

/// Lattice-quadrature route for two uniform balls at spacing h; the
/// independent check of the analytic branch.
double dp_norm_sq_lattice(const UniformBall& a, const UniformBall& b, double h,
                          const UnitSystem& units = {});

/// U(d) = G times the double integral of f_0(r) f_d(s) / |r - s| for two
/// equal balls: G M^2 / d for d >= 2R, tabulated quadrature below.
double ball_pair_potential(double d, double M, double R, double G);
double ball_pair_potential(double d, const ProbeParams& params);

/// Dimensionless overlap potential u(x) = U(x R) R / (G M^2) by direct
/// adaptive quadrature (no table); 0 <= x.
double overlap_potential_quadrature(double x);

/// Off-diagonal decay rate (lambda / 2 hbar) ||f_0 - f_d||^2.
double decoherence_rate(double d, const ProbeParams& params);

struct TwoPointDensityMatrix {
  Vec3 x_a = Vec3::Zero();
  Vec3 x_b = Vec3::Zero();
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Identity() * 0.5;
};

TwoPointDensityMatrix evolve_two_point_superposition(const TwoPointDensityMatrix& rho, double t,
                                                     const ProbeParams& params);

/// Ensemble-mean coherence E[c_a conj(c_b)] of a pure-state unraveling of the
/// collapse equation restricted to two ball positions a distance d apart.
/// Each branch is driven by the ball-integrated noise field; both
/// integrals are drawn jointly from their covariance lambda hbar U(|x_i - x_j|).
struct CoherenceSeries {
  std::vector<double> t;
  std::vector<stats::Estimate> coherence;
  /// Exponent from a weighted fit of log(coherence / coherence(0)) = -gamma t.
  stats::Estimate fitted_rate;
};

CoherenceSeries unravel_two_branch(double d, double T, double dt, std::size_t n, std::uint64_t seed,
                                   const ProbeParams& params, std::size_t samples = 20);

}  // namespace collapse::decoherence
