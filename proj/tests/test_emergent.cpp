#include "doctest.h"

#include <cmath>

#include "collapse/emergent.hpp"
#include "collapse/error.hpp"

using namespace collapse;
using namespace collapse::emergent;

TEST_CASE("ball potentials") {
  CHECK(ball_potential(Vec3(2, 0, 0), Vec3::Zero(), 1.0, 1.0, 1.0) == doctest::Approx(-0.5));
  CHECK(ball_potential(Vec3::Zero(), Vec3::Zero(), 1.0, 1.0, 1.0) == doctest::Approx(-1.5));
  // Interior potential solves the Poisson equation: laplacian = 4 pi G rho.
  const double h = 1e-3, r0 = 0.4;
  auto phi = [](double r) { return ball_potential(Vec3(r, 0, 0), Vec3::Zero(), 1.0, 1.0, 1.0); };
  const double lap = (phi(r0 + h) - 2 * phi(r0) + phi(r0 - h)) / (h * h) + 2.0 / r0 * (phi(r0 + h) - phi(r0 - h)) / (2 * h);
  CHECK(lap == doctest::Approx(3.0).scale(0).epsilon(1e-5));
  const auto p = make_probe_params(1, 1, 0.5);
  std::vector<Probe> probes{{p, {Vec3::Zero()}}, {p, {Vec3(4, 0, 0)}}};
  const Vec3 r(1.3, 2.0, -0.4);
  CHECK(std::abs(mean_field_potential(probes, r) - ball_potential(r, Vec3::Zero(), 1, 1, 1) -
                 ball_potential(r, Vec3(4, 0, 0), 1, 1, 1)) < 1e-12);
}

TEST_CASE("emergent pair force") {
  const auto p = make_probe_params(1, 1, 0.5);
  const Vec3 x1(0, 0, 0), x2(4, 0, 0);
  const Vec3 f = pair_force(x1, x2, p);
  CHECK(f.norm() == doctest::Approx(0.0625).scale(0).epsilon(1e-12));
  CHECK(f.x() > 0.0);
  CHECK((pair_force(x2, x1, p) + f).norm() == 0.0);
  CHECK(pair_force(x1, x2, without_collapse(p)).norm() == 0.0);
  try {
    pair_force(x1, Vec3(1.5, 0, 0), p);
    FAIL("overlap accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::overlap);
  }
}

namespace {

TwoProbeRecords synthetic(const ProbeEnsembleConfig& config, std::size_t pairs, std::size_t windows) {
  const auto& p = config.probes[0].params;
  TwoProbeRecords r;
  r.window = 0.1;
  for (std::size_t w = 0; w < windows; ++w) r.window_start.push_back(0.1 * static_cast<double>(w));
  r.inv_d2.resize(static_cast<Eigen::Index>(pairs), static_cast<Eigen::Index>(windows));
  r.relative_drift.resizeLike(r.inv_d2);
  r.total_drift = Eigen::MatrixXd::Zero(r.inv_d2.rows(), r.inv_d2.cols());
  r.abort_time.assign(pairs, std::nullopt);
  for (Eigen::Index i = 0; i < r.inv_d2.rows(); ++i)
    for (Eigen::Index w = 0; w < r.inv_d2.cols(); ++w) {
      const double d = 4.0 + 0.01 * static_cast<double>(i % 7) + 0.02 * static_cast<double>(w);
      r.inv_d2(i, w) = 1.0 / (d * d);
      r.relative_drift(i, w) = -2.0 * p.lambda * p.G() * p.M * p.M / (d * d);
    }
  return r;
}

}  // namespace

TEST_CASE("coupling fit recovers a noiseless generator") {
  for (double lambda : {0.5, 1.0}) {
    const auto config = make_pair_config(make_probe_params(1, 1, lambda), 4.0, 100);
    const auto rep = estimate_effective_G(synthetic(config, 100, 5), config);
    CHECK(rep.G_eff == doctest::Approx(2.0 * lambda).scale(0).epsilon(1e-10));
    CHECK(rep.target == doctest::Approx(2.0 * lambda));
    CHECK(rep.n_trajectories == 100);
  }
  const auto config = make_pair_config(make_probe_params(1, 1, 0.5), 4.0, 50);
  CHECK_THROWS_AS(estimate_effective_G(synthetic(config, 50, 5), config), Error);
}

TEST_CASE("without feedback there is no mean relative drift") {
  auto config = make_pair_config(make_probe_params(1, 1, 0.5), 4.0, 1000);
  config.feedback = Feedback::none;
  const auto rec = simulate_two_probe(config, 1.0, 0.01, 3);
  std::vector<double> drift;
  for (Eigen::Index i = 0; i < rec.relative_drift.rows(); ++i) drift.push_back(rec.relative_drift.row(i).mean());
  const auto m = stats::mean_of(drift);
  CHECK(std::abs(m.value) < 3.0 * m.std_err);
}

TEST_CASE("mean-field feedback produces the emergent attraction") {
  const auto config = make_pair_config(make_probe_params(1, 1, 0.5), 4.0, 2000);
  const auto rec = simulate_two_probe(config, 5.0, 0.01, 4);
  std::vector<double> drift;
  for (Eigen::Index i = 0; i < rec.relative_drift.rows(); ++i) drift.push_back(rec.relative_drift.row(i).mean());
  const auto m = stats::mean_of(drift);
  CHECK(std::abs(m.value + 0.0625) < 0.05 * 0.0625 + 3.0 * m.std_err);
  const auto rep = estimate_effective_G(rec, config);
  CHECK(std::abs(rep.total_drift.value) < 3.0 * rep.total_drift.std_err);
}

TEST_CASE("field-kernel force correlations") {
  const auto p = make_probe_params(1, 1, 0.5);
  const auto c = field_kernel_force_covariance(p, 4.0, 0.01, 400000, 9, 8);
  REQUIRE(c.lattice.rows() == 6);
  // Cross-covariance of the x forces of the two balls.
  CHECK(c.lattice(0, 3) < 0.0);
  CHECK(std::abs(c.lattice(0, 3)) < c.lattice(0, 0));
  CHECK(c.sampled(0, 3) == doctest::Approx(c.lattice(0, 3)).scale(0).epsilon(0.15));
  for (int k = 0; k < 6; ++k) CHECK(std::abs(c.sampled(k, k) - c.lattice(k, k)) < 4.0 * c.sampled_stderr(k, k));
}

TEST_CASE("field-kernel noise requires quasi-static pinning") {
  auto config = make_pair_config(make_probe_params(1, 1, 0.5), 4.0, 100);
  config.noise_correlation = NoiseCorrelation::field_kernel;
  config.quasi_static = false;
  CHECK_THROWS_AS(simulate_two_probe(config, 1.0, 0.01, 1), Error);
}
