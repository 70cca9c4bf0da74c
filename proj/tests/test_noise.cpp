#include "doctest.h"

#include <cmath>

#include "collapse/error.hpp"
#include "collapse/noise.hpp"

using namespace collapse;

TEST_CASE("collapse force increments have variance D_p dt per axis") {
  const auto p = make_probe_params(1, 1, 0.5);
  const double dt = 0.01;
  NoiseStream s(5, 0);
  const int n = 1000000;
  Vec3 sum = Vec3::Zero(), sq = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3 f = noise::force_increment(p, dt, s);
    sum += f;
    sq += f.cwiseProduct(f);
  }
  CHECK(s.counter() == 3ull * n);
  for (int k = 0; k < 3; ++k) {
    const double var = sq[k] / n - std::pow(sum[k] / n, 2);
    CHECK(var / (0.5 * dt) >= 0.995);
    CHECK(var / (0.5 * dt) <= 1.005);
  }
}

TEST_CASE("zero time step is rejected") {
  const auto p = make_probe_params(1, 1, 0.5);
  NoiseStream s(1, 0);
  try {
    noise::force_increment(p, 0.0, s);
    FAIL("dt = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_step);
  }
}

TEST_CASE("streams with one seed are uncorrelated") {
  NoiseStream a(42, 0), b(42, 1);
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal(), y = b.normal();
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double r = (sab / n - sa * sb / n / n) / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  CHECK(std::abs(r) <= 0.01);
}

TEST_CASE("two-node field covariance") {
  const auto p = make_probe_params(1, 1, 0.5);
  noise::FieldSampler sampler({Vec3::Zero(), Vec3(2, 0, 0)}, 1.0, p, 1.0);
  NoiseStream s(8, 0);
  const Eigen::MatrixXd v = sampler.sample_values(s, 100000);
  const double m0 = v.row(0).mean(), m1 = v.row(1).mean();
  const double cov = ((v.row(0).array() - m0) * (v.row(1).array() - m1)).mean();
  CHECK(cov == doctest::Approx(0.25).scale(0).epsilon(0.04));
  const double sd0 = std::sqrt((v.row(0).array() - m0).square().mean());
  CHECK(std::abs(m0) < 3 * sd0 / std::sqrt(100000.0));
  CHECK(std::abs(m1) < 3 * sd0 / std::sqrt(100000.0));
}

TEST_CASE("single-node variance is the regularized diagonal") {
  const auto p = make_probe_params(1, 1, 0.5);
  const double h = 0.3, dt = 0.02;
  noise::FieldSampler sampler({Vec3::Zero()}, h, p, dt);
  CHECK(sampler.covariance()(0, 0) == doctest::Approx(coulomb::cell_self_average(h) * 0.5 / dt).scale(0).epsilon(1e-12));
}

namespace {
noise::LatticeField field_from(const coulomb::Lattice3& l, double (*f)(const Vec3&)) {
  noise::LatticeField field;
  field.lattice = l;
  field.h = l.h;
  field.dt = 1.0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    field.nodes.push_back(l.position(i));
    field.values.push_back(f(l.position(i)));
  }
  return field;
}
}  // namespace

TEST_CASE("ball-averaged force of simple fields") {
  const auto p = make_probe_params(2, 1, 0.5);
  // Node-sampled ball weights count lattice points inside the sphere, so the
  // linear-field error is irregular in resolution: 4.4% at 8, 1.5% at 16, below 1% from 24 on.
  const auto l = noise::ball_lattice(Vec3::Zero(), 1.0, 32);
  const Vec3 uniform = noise::ball_averaged_force(field_from(l, [](const Vec3&) { return 3.0; }), Vec3::Zero(), p);
  CHECK(uniform.norm() < 1e-12);
  const Vec3 f = noise::ball_averaged_force(field_from(l, [](const Vec3& r) { return 0.7 * r.x(); }), Vec3::Zero(), p);
  CHECK(f.x() == doctest::Approx(-2.0 * 0.7).scale(0).epsilon(0.01));
  CHECK(std::abs(f.y()) < 1e-10);
  CHECK(std::abs(f.z()) < 1e-10);
}

TEST_CASE("ball force covariance approaches D_p / dt") {
  const auto p = make_probe_params(1, 1, 0.5);
  const double dt = 0.01;
  const auto l = noise::ball_lattice(Vec3::Zero(), 1.0, 16);
  const auto cov = noise::ball_force_covariance({noise::BallForceOperator(l, Vec3::Zero(), p)}, p, dt);
  for (int k = 0; k < 3; ++k) {
    const double ratio = cov(k, k) / (p.D_p / dt);
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.1);
  }
}
