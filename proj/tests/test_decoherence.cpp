#include "doctest.h"

#include <cmath>
#include <numbers>

#include "collapse/decoherence.hpp"
#include "collapse/error.hpp"

using namespace collapse;
using decoherence::UniformBall;

namespace {

// Independent oracle: U(d) = -integral over ball A of rho_A(r) phi_B(r), with
// phi_B the closed-form potential of a uniform ball and a midpoint rule in
// (r, cos theta).
double pair_energy_oracle(double d, double M, double R, double G) {
  const int nr = 600, nm = 600;
  const double rho = 3.0 * M / (4.0 * std::numbers::pi * R * R * R);
  double sum = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * R / nr;
    for (int j = 0; j < nm; ++j) {
      const double mu = -1.0 + (j + 0.5) * 2.0 / nm;
      const double s = std::sqrt(r * r + d * d - 2.0 * r * d * mu);
      const double phi = s >= R ? -G * M / s : -G * M * (3.0 * R * R - s * s) / (2.0 * R * R * R);
      sum += -rho * phi * 2.0 * std::numbers::pi * r * r * (R / nr) * (2.0 / nm);
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("pair potential against direct quadrature") {
  for (double d : {0.0, 0.5, 1.0, 1.7, 2.0, 2.5, 10.0}) {
    INFO("d = " << d);
    CHECK(decoherence::ball_pair_potential(d, 1.0, 1.0, 1.0) == doctest::Approx(pair_energy_oracle(d, 1.0, 1.0, 1.0)).scale(0).epsilon(1e-3));
  }
  CHECK(decoherence::ball_pair_potential(0.0, 1.0, 1.0, 1.0) == doctest::Approx(1.2).scale(0).epsilon(1e-9));
  CHECK(decoherence::ball_pair_potential(2.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5).scale(0).epsilon(1e-9));
  CHECK(decoherence::ball_pair_potential(10.0, 1.0, 1.0, 1.0) == doctest::Approx(0.1).scale(0).epsilon(1e-12));
  // Scaling: U(d; M, R, G) = G M^2 / R u(d / R).
  CHECK(decoherence::ball_pair_potential(1.5, 2.0, 3.0, 0.5) ==
        doctest::Approx(0.5 * 4.0 / 3.0 * decoherence::ball_pair_potential(0.5, 1.0, 1.0, 1.0)).scale(0).epsilon(1e-9));
}

TEST_CASE("tabulated overlap potential matches adaptive quadrature") {
  for (double x : {0.05, 0.3, 0.9, 1.4, 1.99})
    CHECK(decoherence::ball_pair_potential(x, 1.0, 1.0, 1.0) ==
          doctest::Approx(decoherence::overlap_potential_quadrature(x)).scale(0).epsilon(1e-8));
}

TEST_CASE("norm of the mass-density difference") {
  const UniformBall a{Vec3::Zero(), 1.0, 1.0};
  CHECK(decoherence::dp_norm_sq(a, a) == 0.0);
  const UniformBall b{Vec3(4, 0, 0), 1.0, 1.0};
  CHECK(decoherence::dp_norm_sq(a, b) == doctest::Approx(1.9).scale(0).epsilon(1e-12));
  CHECK(decoherence::dp_norm_sq(b, a) == decoherence::dp_norm_sq(a, b));
  const UniformBall far{Vec3(1e6, 0, 0), 1.0, 1.0};
  CHECK(decoherence::dp_norm_sq(a, far) == doctest::Approx(2.4).scale(0).epsilon(1e-5));
  double previous = 0.0;
  for (double d = 0.1; d < 12.0; d += 0.3) {
    const double v = decoherence::dp_norm_sq(a, UniformBall{Vec3(0, d, 0), 1.0, 1.0});
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("lattice quadrature agrees with the analytic branch") {
  const UniformBall a{Vec3::Zero(), 1.0, 1.0}, b{Vec3(4, 0, 0), 1.0, 1.0};
  const double lattice = decoherence::dp_norm_sq_lattice(a, b, 1.0 / 16.0);
  CHECK(lattice == doctest::Approx(1.9).scale(0).epsilon(0.005));
}

TEST_CASE("voxelized densities keep their mass") {
  const UniformBall a{Vec3(0.2, 0, 0), 2.0, 1.0};
  const auto l = coulomb::covering_lattice(Vec3::Constant(-1.5), Vec3::Constant(1.5), 0.1);
  const auto v = decoherence::voxelize(a, l);
  CHECK(decoherence::total_mass(v) == doctest::Approx(2.0).scale(0).epsilon(1e-3));
  CHECK(decoherence::total_mass(a) == 2.0);
}

TEST_CASE("decoherence rate") {
  const auto p = make_probe_params(1, 1, 0.5);
  CHECK(decoherence::decoherence_rate(0.0, p) == 0.0);
  CHECK(decoherence::decoherence_rate(4.0, p) == doctest::Approx(0.475).scale(0).epsilon(1e-12));
  CHECK(decoherence::decoherence_rate(1e6, p) == doctest::Approx(0.6).scale(0).epsilon(1e-5));
}

TEST_CASE("two-point superposition decays exponentially") {
  const auto p = make_probe_params(1, 1, 0.5);
  decoherence::TwoPointDensityMatrix rho;
  rho.x_b = Vec3(4, 0, 0);
  rho.rho << 0.5, 0.5, 0.5, 0.5;
  const auto same = decoherence::evolve_two_point_superposition(rho, 0.0, p);
  CHECK((same.rho - rho.rho).norm() < 1e-15);
  const double t = std::log(2.0) / decoherence::decoherence_rate(4.0, p);
  const auto later = decoherence::evolve_two_point_superposition(rho, t, p);
  CHECK(std::abs(later.rho(0, 1)) == doctest::Approx(0.25).scale(0).epsilon(1e-12));
  CHECK(std::abs(later.rho(1, 0)) == doctest::Approx(0.25).scale(0).epsilon(1e-12));
  CHECK(later.rho(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("pure-state unraveling reproduces the decay rate") {
  const auto p = make_probe_params(1, 1, 0.5);
  const auto series = decoherence::unravel_two_branch(4.0, 3.0, 0.01, 2000, 5, p);
  const double gamma = decoherence::decoherence_rate(4.0, p);
  CHECK(series.fitted_rate.value == doctest::Approx(gamma).scale(0).epsilon(0.1));
  const auto& first = series.coherence.front();
  CHECK(std::abs(first.value - 0.5 * std::exp(-gamma * series.t.front())) < 3.0 * first.std_err + 1e-12);
}
