#include "doctest.h"

#include <cmath>
#include <array>
#include <numbers>

#include "collapse/core.hpp"
#include "collapse/error.hpp"

using namespace collapse;

TEST_CASE("unit probe scales") {
  const auto p = make_probe_params(1, 1, 0.5);
  CHECK(p.omega_G == doctest::Approx(1.0).scale(0).epsilon(1e-15));
  CHECK(p.V_R == doctest::Approx(4.18879).scale(0).epsilon(1e-6));
  CHECK(p.D_p == doctest::Approx(0.5).scale(0).epsilon(1e-15));
}

TEST_CASE("heavier probe oscillates faster") {
  const auto p = make_probe_params(4, 1, 0.5);
  CHECK(p.omega_G == doctest::Approx(2.0));
  CHECK(p.D_p == doctest::Approx(8.0));
}

TEST_CASE("equilibrium width matches the Riccati fixed point") {
  // Stationary a solves (2 i hbar / M) a^2 = lambda M w^2 / hbar; take the root with Re a > 0.
  for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
    const auto p = make_probe_params(1.7, 0.8, lambda, {1.3, 0.9});
    const double s = lambda * p.M * p.omega_G * p.omega_G / p.hbar();
    const std::complex<double> a = std::sqrt(std::complex<double>(0.0, -s * p.M / (2.0 * p.hbar())));
    const double expected = 0.25 / std::abs(a.real());
    CHECK(p.sigma_inf_sq == doctest::Approx(expected).scale(0).epsilon(1e-12));
  }
  CHECK(make_probe_params(1, 1, 0.5).sigma_inf_sq == doctest::Approx(std::sqrt(0.5)).scale(0).epsilon(1e-12));
}

TEST_CASE("omega_G is consistent for arbitrary inputs") {
  for (double M : {0.01, 1.0, 37.0})
    for (double R : {0.1, 1.0, 5.0}) {
      const auto p = make_probe_params(M, R, 0.5, {1.0, 2.5});
      CHECK(std::abs(p.omega_G * p.omega_G * R * R * R / (2.5 * M) - 1.0) < 1e-12);
    }
}

TEST_CASE("invalid parameters are rejected") {
  for (auto bad : {std::array{0.0, 1.0, 0.5}, std::array{1.0, -1.0, 0.5}, std::array{1.0, 1.0, 0.0},
                   std::array{std::nan(""), 1.0, 0.5}}) {
    try {
      make_probe_params(bad[0], bad[1], bad[2]);
      FAIL("accepted invalid parameters");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_parameter);
    }
  }
}

TEST_CASE("characteristic scales") {
  const auto s = characteristic_scales(make_probe_params(1, 1, 0.5));
  CHECK(s.dt_recommended <= 0.01);
  CHECK(s.L_recommended >= 20.0 * std::sqrt(make_probe_params(1, 1, 0.5).sigma_inf_sq));
  CHECK(characteristic_scales(make_probe_params(100, 1, 0.5)).t_osc == doctest::Approx(0.1));
}

TEST_CASE("control params switch the collapse off") {
  const auto p = without_collapse(make_probe_params(1, 1, 0.5));
  CHECK(p.lambda == 0.0);
  CHECK(p.D_p == 0.0);
  CHECK(p.collapse_strength() == 0.0);
}
