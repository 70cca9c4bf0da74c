#include "doctest.h"

#include <cmath>
#include <vector>

#include "collapse/error.hpp"
#include "collapse/rng.hpp"
#include "collapse/stats.hpp"
#include "collapse/trajectories.hpp"

using namespace collapse;
using trajectories::CentroidState;

TEST_CASE("noiseless centroid coasts") {
  const auto p = make_probe_params(1, 1, 0.5);
  CentroidState s{Vec3(1, 0, 0), Vec3(0.5, -1, 2)};
  for (int i = 0; i < 100; ++i) s = trajectories::step_centroid(s, 0.01, Vec3::Zero(), p);
  CHECK((s.xbar - Vec3(1.5, -1, 2)).norm() < 1e-12);
  CHECK(s.t == doctest::Approx(1.0));
}

TEST_CASE("analytic moments") {
  const auto p = make_probe_params(1, 1, 0.5);
  const auto zero = trajectories::analytic_moments(p, 0.0);
  for (int k = 0; k < 3; ++k) {
    CHECK(zero.var_p[k].value == 0.0);
    CHECK(zero.var_x[k].value == 0.0);
    CHECK(zero.cov_xp[k].value == 0.0);
  }
  const auto a = trajectories::analytic_moments(p, 1.3), b = trajectories::analytic_moments(p, 2.6);
  CHECK(b.var_p[0].value == 2.0 * a.var_p[0].value);
  const double t = 10.0, c = 2.0 * p.sigma_inf_sq / p.hbar();
  const auto m = trajectories::analytic_moments(p, t);
  CHECK(m.var_p[1].value == doctest::Approx(p.D_p * t));
  CHECK(m.var_x[1].value == doctest::Approx(p.D_p * (t * t * t / 3 + c * c * t + c * t * t)));
  CHECK(m.cov_xp[1].value == doctest::Approx(p.D_p * (t * t / 2 + c * t)));
}

TEST_CASE("analytic moments against a fine-step simulation") {
  // Independent Euler integration of the same SDE on its own streams.
  const auto p = make_probe_params(1, 1, 0.5);
  const double T = 1.0, dt = 1e-4, c = 2.0 * p.sigma_inf_sq / p.hbar();
  const int n = 20000, steps = static_cast<int>(T / dt);
  std::vector<double> x(n), q(n);
  for (int i = 0; i < n; ++i) {
    NoiseStream s(99, stream_id(purpose::check, static_cast<std::uint64_t>(i)));
    double xi = 0, pi = 0;
    for (int k = 0; k < steps; ++k) {
      const double dW = std::sqrt(p.D_p * dt) * s.normal();
      xi += pi * dt + c * dW;
      pi += dW;
    }
    x[static_cast<std::size_t>(i)] = xi;
    q[static_cast<std::size_t>(i)] = pi;
  }
  const auto m = trajectories::analytic_moments(p, T);
  const auto vx = stats::variance_of(x), vp = stats::variance_of(q), cxp = stats::covariance_of(x, q);
  CHECK(std::abs(vx.value - m.var_x[0].value) < 3 * vx.std_err);
  CHECK(std::abs(vp.value - m.var_p[0].value) < 3 * vp.std_err);
  CHECK(std::abs(cxp.value - m.cov_xp[0].value) < 3 * cxp.std_err);
}

TEST_CASE("ensemble runs are reproducible") {
  const auto p = make_probe_params(1, 1, 0.5);
  const auto a = trajectories::ensemble_run(2, 1.0, 0.01, 5, p);
  const auto b = trajectories::ensemble_run(2, 1.0, 0.01, 5, p);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      CHECK(a[i].var_x[k].value == b[i].var_x[k].value);
      CHECK(a[i].cov_xp[k].value == b[i].cov_xp[k].value);
    }
}

TEST_CASE("ensemble momentum variance matches the analytic value") {
  const auto p = make_probe_params(1, 1, 0.5);
  const auto reports = trajectories::ensemble_run(10000, 10.0, 0.01, 17, p);
  for (const auto& r : reports)
    for (int k = 0; k < 3; ++k)
      CHECK(r.var_p[k].value == doctest::Approx(p.D_p * r.t).scale(0).epsilon(0.05));
}

TEST_CASE("ensemble moments converge as 1/sqrt(n)") {
  const auto p = make_probe_params(1, 1, 0.5);
  const auto exact = trajectories::analytic_moments(p, 2.0).var_p[0].value;
  std::vector<double> logn, logerr;
  for (std::size_t n : {100, 1000, 10000}) {
    double se = 0.0, rms = 0.0;
    const int reps = 8;
    for (int r = 0; r < reps; ++r) {
      const auto rep = trajectories::ensemble_run(n, 2.0, 0.02, 100 + r, p).back();
      rms += std::pow(rep.var_p[0].value - exact, 2);
      se += rep.var_p[0].std_err;
    }
    CHECK(std::sqrt(rms / reps) < 3.0 * se / reps);
    logn.push_back(std::log(static_cast<double>(n)));
    logerr.push_back(std::log(se / reps));
  }
  CHECK(stats::fit_line(logn, logerr).slope == doctest::Approx(-0.5).scale(0).epsilon(0.05));
}

TEST_CASE("path discontinuity scales as sqrt(dt)") {
  const auto p = make_probe_params(1, 1, 0.5);
  std::vector<double> ldt, lm;
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    const auto m = trajectories::discontinuity_metric(50, 0.1, dt, 3, p);
    ldt.push_back(std::log(dt));
    lm.push_back(std::log(m.value));
  }
  CHECK(stats::fit_line(ldt, lm).slope == doctest::Approx(0.5).scale(0).epsilon(0.05));
}

TEST_CASE("ensemble preconditions") {
  const auto p = make_probe_params(1, 1, 0.5);
  CHECK_THROWS_AS(trajectories::ensemble_run(1, 1.0, 0.01, 1, p), Error);
  CHECK_THROWS_AS(trajectories::ensemble_run(10, 1.0, 0.0, 1, p), Error);
  trajectories::EnsembleOptions o;
  o.n = 1000000;
  o.T = 1000;
  o.dt = 1e-3;
  try {
    trajectories::ensemble_run(o, p);
    FAIL("capacity not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity);
  }
}
