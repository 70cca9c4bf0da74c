#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "collapse/core.hpp"
#include "collapse/coulomb.hpp"
#include "collapse/rng.hpp"

namespace collapse::noise {

/// Momentum increment of the collapse force over dt: three independent
/// N(0, D_p dt) components. Advances the stream counter by exactly 3.
Vec3 force_increment(const ProbeParams& params, double dt, NoiseStream& stream);

/// One time-step sample of the noise field on a node set. `values` carry the
/// white-noise-in-time convention of a field held constant over dt, i.e.
/// covariance lambda hbar G k(r_a, r_b) / dt.
struct LatticeField {
  std::vector<Vec3> nodes;
  std::vector<double> values;
  double dt = 0.0;
  double h = 0.0;
  /// Present when the nodes are a full regular lattice (needed for gradients).
  std::optional<coulomb::Lattice3> lattice;
};

/// Covariance of the field on `nodes` with cell size h.
Eigen::MatrixXd field_covariance(const std::vector<Vec3>& nodes, double h,
                                 const ProbeParams& params, double dt);

/// Symmetric factorization of the field covariance, built once and shared.
class FieldSampler {
 public:
  FieldSampler(std::vector<Vec3> nodes, double h, const ProbeParams& params, double dt);
  explicit FieldSampler(const coulomb::Lattice3& lattice, const ProbeParams& params, double dt);

  LatticeField sample(NoiseStream& stream) const;
  /// `count` samples as columns; consumes count * nodes normals in column order.
  Eigen::MatrixXd sample_values(NoiseStream& stream, std::size_t count) const;

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  double dt() const { return dt_; }
  double h() const { return h_; }
  const std::optional<coulomb::Lattice3>& lattice() const { return lattice_; }

 private:
  void factorize();

  std::vector<Vec3> nodes_;
  double h_;
  double dt_;
  std::optional<coulomb::Lattice3> lattice_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

LatticeField sample_field_lattice(const coulomb::Lattice3& lattice, const ProbeParams& params,
                                  double dt, NoiseStream& stream);
LatticeField sample_field_lattice(const std::vector<Vec3>& nodes, double h,
                                  const ProbeParams& params, double dt, NoiseStream& stream);

/// Linear map from lattice values to the ball-averaged force
/// -(M/V_R) sum_nodes grad phi(node) w(node), with central-difference
/// gradients and cell weights w = h^3 * (volume fraction inside the ball).
/// Row k is the k-th force component; each row is sparse in practice.
class BallForceOperator {
 public:
  BallForceOperator(const coulomb::Lattice3& lattice, const Vec3& center, const ProbeParams& params);

  Vec3 apply(const std::vector<double>& values) const;
  /// Lattice indices with a nonzero coefficient in any row.
  const std::vector<std::size_t>& support() const { return support_; }
  /// Coefficients restricted to support(), shape 3 x support().size().
  const Eigen::Matrix<double, 3, Eigen::Dynamic>& coefficients() const { return coeff_; }
  const coulomb::Lattice3& lattice() const { return lattice_; }

 private:
  coulomb::Lattice3 lattice_;
  std::vector<std::size_t> support_;
  Eigen::Matrix<double, 3, Eigen::Dynamic> coeff_;
};

Vec3 ball_averaged_force(const LatticeField& field, const Vec3& center, const ProbeParams& params);

/// Lattice that resolves a ball of radius R at `nodes_per_diameter`, with the
/// extra layer the central differences need.
coulomb::Lattice3 ball_lattice(const Vec3& center, double R, int nodes_per_diameter);

/// Exact covariance of the stacked ball-averaged forces of several balls
/// (3 rows per ball) under the lattice field covariance, evaluated without
/// factorizing: C K C^T over the operator supports.
Eigen::MatrixXd ball_force_covariance(const std::vector<BallForceOperator>& ops,
                                      const ProbeParams& params, double dt);

/// Gaussian sampler for the stacked ball forces of several balls that share
/// one noise field, using the exact covariance from ball_force_covariance.
class BallForceSampler {
 public:
  BallForceSampler(const std::vector<BallForceOperator>& ops, const ProbeParams& params, double dt);

  /// Momentum increments (force times dt) for every ball, stacked.
  Eigen::VectorXd increments(NoiseStream& stream) const;
  const Eigen::MatrixXd& force_covariance() const { return cov_; }

 private:
  double dt_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

}  // namespace collapse::noise
