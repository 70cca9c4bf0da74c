#include "collapse/noise.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "collapse/error.hpp"

namespace collapse::noise {

Vec3 force_increment(const ProbeParams& params, double dt, NoiseStream& stream) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive, got " + std::to_string(dt));
  const double sd = std::sqrt(params.D_p * dt);
  const double x = stream.normal();
  const double y = stream.normal();
  const double z = stream.normal();
  return sd * Vec3(x, y, z);
}

Eigen::MatrixXd field_covariance(const std::vector<Vec3>& nodes, double h, const ProbeParams& params,
                                 double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  const auto n = static_cast<Eigen::Index>(nodes.size());
  const double scale = params.lambda * params.hbar() * params.G() / dt;
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    K(a, a) = scale * coulomb::cell_self_average(h);
    for (Eigen::Index b = 0; b < a; ++b) {
      const double d = (nodes[a] - nodes[b]).norm();
      if (d == 0.0)
        throw Error(ErrorKind::degenerate_kernel,
                    "nodes " + std::to_string(b) + " and " + std::to_string(a) + " coincide");
      K(a, b) = K(b, a) = scale / d;
    }
  }
  return K;
}

FieldSampler::FieldSampler(std::vector<Vec3> nodes, double h, const ProbeParams& params, double dt)
    : nodes_(std::move(nodes)), h_(h), dt_(dt) {
  cov_ = field_covariance(nodes_, h_, params, dt_);
  factorize();
}

FieldSampler::FieldSampler(const coulomb::Lattice3& lattice, const ProbeParams& params, double dt)
    : h_(lattice.h), dt_(dt), lattice_(lattice) {
  nodes_.reserve(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) nodes_.push_back(lattice.position(i));
  cov_ = field_covariance(nodes_, h_, params, dt_);
  factorize();
}

void FieldSampler::factorize() {
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_, Eigen::EigenvaluesOnly);
    throw Error(ErrorKind::kernel_regularization,
                "regularized kernel is not positive definite; most negative eigenvalue " +
                    std::to_string(eig.eigenvalues().minCoeff()));
  }
  factor_ = llt.matrixL();
}

LatticeField FieldSampler::sample(NoiseStream& stream) const {
  Eigen::MatrixXd values = sample_values(stream, 1);
  LatticeField f;
  f.nodes = nodes_;
  f.values.assign(values.data(), values.data() + values.size());
  f.dt = dt_;
  f.h = h_;
  f.lattice = lattice_;
  return f;
}

Eigen::MatrixXd FieldSampler::sample_values(NoiseStream& stream, std::size_t count) const {
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXd z(n, static_cast<Eigen::Index>(count));
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    for (Eigen::Index r = 0; r < n; ++r) z(r, c) = stream.normal();
  return factor_.triangularView<Eigen::Lower>() * z;
}

LatticeField sample_field_lattice(const coulomb::Lattice3& lattice, const ProbeParams& params,
                                  double dt, NoiseStream& stream) {
  return FieldSampler(lattice, params, dt).sample(stream);
}

LatticeField sample_field_lattice(const std::vector<Vec3>& nodes, double h, const ProbeParams& params,
                                  double dt, NoiseStream& stream) {
  return FieldSampler(nodes, h, params, dt).sample(stream);
}

coulomb::Lattice3 ball_lattice(const Vec3& center, double R, int nodes_per_diameter) {
  const double h = 2.0 * R / nodes_per_diameter;
  return coulomb::covering_lattice(center - Vec3::Constant(R), center + Vec3::Constant(R), h, 1);
}

BallForceOperator::BallForceOperator(const coulomb::Lattice3& lattice, const Vec3& center,
                                     const ProbeParams& params)
    : lattice_(lattice) {
  const double h = lattice.h;
  if (2.0 * params.R / h < 8.0 - 1e-9)
    throw Error(ErrorKind::coverage, "lattice spacing " + std::to_string(h) +
                                         " gives fewer than 8 nodes per diameter; need h <= " +
                                         std::to_string(params.R / 4.0));
  // Weights are theta(R - r) evaluated at the node, times the cell volume.
  const auto frac = coulomb::ball_fill_fraction(lattice, center, params.R, 1);
  // Compact central differences on cell faces: the gradient between nodes a
  // and a+e is (phi[a+e] - phi[a]) / h, weighted by the mean cell weight of
  // the two cells sharing the face.
  const double pref = -params.M / params.V_R * h * h * h / h;
  std::vector<std::array<double, 3>> dense(lattice.size(), {0.0, 0.0, 0.0});
  double covered = 0.0;
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    if (frac[idx] == 0.0) continue;
    covered += frac[idx];
    const auto c = lattice.coords(idx);
    for (int axis = 0; axis < 3; ++axis)
      if (c[axis] == 0 || c[axis] == lattice.dims[axis] - 1)
        throw Error(ErrorKind::coverage,
                    "lattice does not extend one node beyond the ball; pad it by at least h=" +
                        std::to_string(h));
  }
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    const auto c = lattice.coords(idx);
    for (int axis = 0; axis < 3; ++axis) {
      auto up = c;
      ++up[axis];
      if (!lattice.contains(up[0], up[1], up[2])) continue;
      const std::size_t next = lattice.index(up[0], up[1], up[2]);
      const double face = 0.5 * (frac[idx] + frac[next]);
      if (face == 0.0) continue;
      dense[next][axis] += pref * face;
      dense[idx][axis] -= pref * face;
    }
  }
  const double expected = params.V_R / (h * h * h);
  if (covered < 0.9 * expected)
    throw Error(ErrorKind::coverage, "lattice covers only " + std::to_string(covered / expected) +
                                         " of the ball volume");
  for (std::size_t idx = 0; idx < dense.size(); ++idx) {
    const auto& d = dense[idx];
    if (std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2]) > 1e-14 * std::abs(pref))
      support_.push_back(idx);
  }
  coeff_.resize(3, static_cast<Eigen::Index>(support_.size()));
  for (std::size_t s = 0; s < support_.size(); ++s)
    for (int axis = 0; axis < 3; ++axis)
      coeff_(axis, static_cast<Eigen::Index>(s)) = dense[support_[s]][axis];
}

Vec3 BallForceOperator::apply(const std::vector<double>& values) const {
  if (values.size() != lattice_.size())
    throw Error(ErrorKind::coverage, "field values do not match the operator lattice");
  Vec3 f = Vec3::Zero();
  for (std::size_t s = 0; s < support_.size(); ++s)
    f += coeff_.col(static_cast<Eigen::Index>(s)) * values[support_[s]];
  return f;
}

Vec3 ball_averaged_force(const LatticeField& field, const Vec3& center, const ProbeParams& params) {
  if (!field.lattice)
    throw Error(ErrorKind::coverage, "ball averaging needs a regular lattice field");
  return BallForceOperator(*field.lattice, center, params).apply(field.values);
}

Eigen::MatrixXd ball_force_covariance(const std::vector<BallForceOperator>& ops,
                                      const ProbeParams& params, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  const auto m = static_cast<Eigen::Index>(ops.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3 * m, 3 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& oi = ops[i];
    std::vector<Vec3> pos_i;
    for (auto idx : oi.support()) pos_i.push_back(oi.lattice().position(idx));
    for (Eigen::Index j = i; j < m; ++j) {
      const auto& oj = ops[j];
      if (std::abs(oi.lattice().h - oj.lattice().h) > 1e-12 * oi.lattice().h)
        throw Error(ErrorKind::coverage, "ball operators must share one lattice spacing");
      std::vector<Vec3> pos_j;
      for (auto idx : oj.support()) pos_j.push_back(oj.lattice().position(idx));
      const double h = oi.lattice().h;
      Eigen::Matrix3d block = Eigen::Matrix3d::Zero();
      for (std::size_t a = 0; a < pos_i.size(); ++a) {
        Vec3 acc = Vec3::Zero();
        for (std::size_t b = 0; b < pos_j.size(); ++b)
          acc += coulomb::kernel(pos_i[a], pos_j[b], h) * oj.coefficients().col(static_cast<Eigen::Index>(b));
        block += oi.coefficients().col(static_cast<Eigen::Index>(a)) * acc.transpose();
      }
      cov.block<3, 3>(3 * i, 3 * j) = block;
      cov.block<3, 3>(3 * j, 3 * i) = block.transpose();
    }
  }
  return cov * (params.lambda * params.hbar() * params.G() / dt);
}

BallForceSampler::BallForceSampler(const std::vector<BallForceOperator>& ops, const ProbeParams& params,
                                   double dt)
    : dt_(dt), cov_(ball_force_covariance(ops, params, dt)) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::kernel_regularization, "ball-force covariance is not positive definite");
  factor_ = llt.matrixL();
}

Eigen::VectorXd BallForceSampler::increments(NoiseStream& stream) const {
  Eigen::VectorXd z(cov_.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = stream.normal();
  Eigen::VectorXd f = factor_.triangularView<Eigen::Lower>() * z;
  return dt_ * f;
}

}  // namespace collapse::noise
