#include "collapse/decoherence.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "collapse/error.hpp"
#include "collapse/parallel.hpp"
#include "collapse/rng.hpp"

namespace collapse::decoherence {

namespace {

constexpr double kPi = std::numbers::pi;

// Potential of the unit ball (M = R = G = 1) at distance s from its centre,
// taken positive.
double unit_ball_potential(double s) { return s >= 1.0 ? 1.0 / s : 0.5 * (3.0 - s * s); }

// Area of the sphere |r| = s lying inside the unit ball centred at distance x.
double area_inside(double s, double x) {
  if (s == 0.0) return 0.0;
  if (s + x <= 1.0) return 4.0 * kPi * s * s;
  if (s >= 1.0 + x || s <= x - 1.0) return 0.0;
  const double c = std::clamp((s * s + x * x - 1.0) / (2.0 * s * x), -1.0, 1.0);
  return 2.0 * kPi * s * s * (1.0 - c);
}

constexpr std::size_t kTablePoints = 1025;

class OverlapTable {
 public:
  OverlapTable() {
    std::vector<double> u(kTablePoints);
    for (std::size_t i = 0; i < kTablePoints; ++i)
      u[i] = overlap_potential_quadrature(2.0 * static_cast<double>(i) / (kTablePoints - 1));
    spline_ = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        u.begin(), u.end(), 0.0, 2.0 / (kTablePoints - 1));
  }
  double operator()(double x) const { return (*spline_)(x); }

 private:
  std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

const OverlapTable& overlap_table() {
  static const OverlapTable table;
  return table;
}

double voxelization_error(const UniformBall& ball, const coulomb::Lattice3& lattice) {
  const LatticeDensity vox = voxelize(ball, lattice);
  const double lattice_self = coulomb::lattice_coulomb(lattice, vox.values, vox.values);
  const double exact = 1.2 * ball.M * ball.M / ball.R;
  return std::abs(lattice_self - exact) / exact;
}

coulomb::Lattice3 lattice_for_balls(const UniformBall& a, const UniformBall& b, double h) {
  const Vec3 lo = (a.center - Vec3::Constant(a.R)).cwiseMin(b.center - Vec3::Constant(b.R));
  const Vec3 hi = (a.center + Vec3::Constant(a.R)).cwiseMax(b.center + Vec3::Constant(b.R));
  return coulomb::covering_lattice(lo, hi, h, 1);
}

}  // namespace

double overlap_potential_quadrature(double x) {
  using boost::math::quadrature::gauss_kronrod;
  if (x < 0.0) throw Error(ErrorKind::invalid_parameter, "distance must be non-negative");
  const double s_lo = std::max(0.0, x - 1.0);
  const double s_hi = 1.0 + x;
  std::vector<double> cuts{s_lo, s_hi, std::abs(1.0 - x), 1.0};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto integrand = [x](double s) { return unit_ball_potential(s) * area_inside(s, x); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] < s_lo || cuts[i + 1] > s_hi || cuts[i + 1] <= cuts[i]) continue;
    total += gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 10, 1e-13);
  }
  return total * 3.0 / (4.0 * kPi);
}

double ball_pair_potential(double d, double M, double R, double G) {
  if (d < 0.0) throw Error(ErrorKind::invalid_parameter, "distance must be non-negative");
  if (d >= 2.0 * R) return G * M * M / d;
  return G * M * M / R * overlap_table()(d / R);
}

double ball_pair_potential(double d, const ProbeParams& params) {
  return ball_pair_potential(d, params.M, params.R, params.G());
}

double total_mass(const MassDensity& f) {
  if (const auto* ball = std::get_if<UniformBall>(&f)) return ball->M;
  const auto& lat = std::get<LatticeDensity>(f);
  double s = 0.0;
  for (double v : lat.values) s += v;
  return s * std::pow(lat.lattice.h, 3);
}

LatticeDensity voxelize(const UniformBall& ball, const coulomb::Lattice3& lattice) {
  LatticeDensity out;
  out.lattice = lattice;
  out.values = coulomb::ball_fill_fraction(lattice, ball.center, ball.R, 8);
  const double rho = ball.M / (4.0 * kPi * ball.R * ball.R * ball.R / 3.0);
  for (double& v : out.values) v *= rho;
  return out;
}

double dp_norm_sq_lattice(const UniformBall& a, const UniformBall& b, double h, const UnitSystem& units) {
  const auto lattice = lattice_for_balls(a, b, h);
  const auto fa = voxelize(a, lattice);
  const auto fb = voxelize(b, lattice);
  std::vector<double> diff(lattice.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fa.values[i] - fb.values[i];
  return units.G * coulomb::lattice_coulomb(lattice, diff, diff);
}

double dp_norm_sq(const MassDensity& f, const MassDensity& g, const UnitSystem& units, double tolerance) {
  for (const auto* m : {&f, &g}) {
    if (!(total_mass(*m) > 0.0))
      throw Error(ErrorKind::invalid_parameter, "mass density must have positive total mass");
    if (const auto* lat = std::get_if<LatticeDensity>(m))
      for (double v : lat->values)
        if (v < 0.0) throw Error(ErrorKind::invalid_parameter, "lattice density must be non-negative");
  }

  const auto* ba = std::get_if<UniformBall>(&f);
  const auto* bb = std::get_if<UniformBall>(&g);
  if (ba && bb) {
    if (ba->center == bb->center && ba->M == bb->M && ba->R == bb->R) return 0.0;
    const double d = (ba->center - bb->center).norm();
    const double self = 1.2 * (ba->M * ba->M / ba->R + bb->M * bb->M / bb->R);
    if (d >= ba->R + bb->R) return units.G * (self - 2.0 * ba->M * bb->M / d);
    if (ba->R == bb->R)
      return units.G * (self - 2.0 * ba->M * bb->M / ba->R * overlap_table()(d / ba->R));
    // Overlapping balls of different radii: refine the lattice until stable.
    double h = std::min(ba->R, bb->R) / 8.0;
    double previous = dp_norm_sq_lattice(*ba, *bb, h, units);
    for (int level = 0; level < 2; ++level) {
      h *= 0.5;
      const double current = dp_norm_sq_lattice(*ba, *bb, h, units);
      // Roughly second-order convergence: the remaining error is about a third
      // of the last change.
      if (std::abs(current - previous) / 3.0 <= tolerance * std::abs(current)) return current;
      previous = current;
    }
    throw Error(ErrorKind::precision, "lattice quadrature did not reach relative tolerance " +
                                          std::to_string(tolerance));
  }

  // At least one lattice density: rasterize balls onto its lattice.
  const LatticeDensity& base = ba ? std::get<LatticeDensity>(g) : std::get<LatticeDensity>(f);
  const auto& lattice = base.lattice;
  auto on_lattice = [&](const MassDensity& m) -> LatticeDensity {
    if (const auto* ball = std::get_if<UniformBall>(&m)) {
      const double err = voxelization_error(*ball, lattice);
      if (err > tolerance)
        throw Error(ErrorKind::precision,
                    "lattice spacing " + std::to_string(lattice.h) + " resolves a ball of radius " +
                        std::to_string(ball->R) + " only to relative error " + std::to_string(err));
      return voxelize(*ball, lattice);
    }
    const auto& lat = std::get<LatticeDensity>(m);
    if (lat.lattice.dims != lattice.dims || (lat.lattice.origin - lattice.origin).norm() > 1e-12 ||
        lat.lattice.h != lattice.h)
      throw Error(ErrorKind::invalid_parameter, "lattice densities must share one lattice");
    return lat;
  };
  const auto lf = on_lattice(f);
  const auto lg = on_lattice(g);
  std::vector<double> diff(lattice.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = lf.values[i] - lg.values[i];
  return units.G * coulomb::lattice_coulomb(lattice, diff, diff);
}

double decoherence_rate(double d, const ProbeParams& params) {
  if (d < 0.0) throw Error(ErrorKind::invalid_parameter, "distance must be non-negative");
  if (d == 0.0) return 0.0;
  const double norm_sq =
      2.0 * (ball_pair_potential(0.0, params) - ball_pair_potential(d, params));
  return params.lambda / (2.0 * params.hbar()) * norm_sq;
}

TwoPointDensityMatrix evolve_two_point_superposition(const TwoPointDensityMatrix& rho, double t,
                                                     const ProbeParams& params) {
  if (t < 0.0) throw Error(ErrorKind::invalid_parameter, "t must be non-negative");
  TwoPointDensityMatrix out = rho;
  const double decay = std::exp(-decoherence_rate((rho.x_a - rho.x_b).norm(), params) * t);
  out.rho(0, 1) *= decay;
  out.rho(1, 0) *= decay;
  return out;
}

CoherenceSeries unravel_two_branch(double d, double T, double dt, std::size_t n, std::uint64_t seed,
                                   const ProbeParams& params, std::size_t samples) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  if (n < 2) throw Error(ErrorKind::invalid_parameter, "ensemble needs n >= 2");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  samples = std::min(samples, steps);
  const double hbar = params.hbar();
  const double lambda = params.lambda;
  const double u0 = ball_pair_potential(0.0, params);
  const double ud = ball_pair_potential(d, params);
  // Joint increments of the two ball-integrated fields: covariance
  // lambda hbar dt [[u0, ud], [ud, u0]], factored by hand.
  const double scale = std::sqrt(lambda * hbar * dt);
  const double l11 = std::sqrt(u0);
  const double l21 = ud / l11;
  const double l22 = std::sqrt(std::max(u0 - l21 * l21, 0.0));

  std::vector<std::size_t> at(samples);
  for (std::size_t k = 0; k < samples; ++k) at[k] = (k + 1) * steps / samples;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(samples));

  parallel::for_each_index(n, [&](std::size_t i) {
    NoiseStream stream(seed, stream_id(purpose::branch, i));
    double ca = std::sqrt(0.5), cb = std::sqrt(0.5);
    std::size_t next = 0;
    for (std::size_t step = 1; step <= steps && next < samples; ++step) {
      const double z1 = stream.normal();
      const double z2 = stream.normal();
      const double phi_a = scale * l11 * z1;
      const double phi_b = scale * (l21 * z1 + l22 * z2);
      const double pa = ca * ca, pb = cb * cb;
      const double mean_phi = pa * phi_a + pb * phi_b;
      // Q_i = U_ii - 2 sum_j p_j U_ij + sum_jk p_j p_k U_jk.
      const double cross = pa * pa * u0 + pb * pb * u0 + 2.0 * pa * pb * ud;
      const double qa = u0 - 2.0 * (pa * u0 + pb * ud) + cross;
      const double qb = u0 - 2.0 * (pa * ud + pb * u0) + cross;
      ca *= std::exp(-lambda / hbar * qa * dt - (phi_a - mean_phi) / hbar);
      cb *= std::exp(-lambda / hbar * qb * dt - (phi_b - mean_phi) / hbar);
      const double norm = std::sqrt(ca * ca + cb * cb);
      ca /= norm;
      cb /= norm;
      if (step == at[next]) {
        values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(next)) = ca * cb;
        ++next;
      }
    }
  });

  CoherenceSeries out;
  std::vector<double> ts, logs, sig;
  for (std::size_t k = 0; k < samples; ++k) {
    const auto col = values.col(static_cast<Eigen::Index>(k));
    std::vector<double> v(col.data(), col.data() + col.size());
    const auto est = stats::mean_of(v);
    const double t = static_cast<double>(at[k]) * dt;
    out.t.push_back(t);
    out.coherence.push_back(est);
    if (est.value > 0.0 && est.std_err < 0.2 * est.value) {
      ts.push_back(t);
      logs.push_back(-std::log(est.value / 0.5) / t);
      sig.push_back(est.std_err / est.value / t);
    }
  }
  if (ts.empty()) throw Error(ErrorKind::low_statistics, "coherence decayed below the noise floor");
  // Each sample gives an independent-looking estimate of the rate; combine by
  // inverse-variance weighting (a proportional fit of -log c/c0 against t).
  std::vector<double> ones(ts.size(), 1.0);
  out.fitted_rate = stats::fit_proportional(ones, logs, sig);
  return out;
}

}  // namespace collapse::decoherence
