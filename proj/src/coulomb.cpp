#include "collapse/coulomb.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace collapse::coulomb {

namespace {

// Integral over z in [0, 1] of (1 - z) / sqrt(rho^2 + z^2).
double z_profile(double rho) {
  return std::asinh(1.0 / rho) - (std::sqrt(rho * rho + 1.0) - rho);
}

double compute_self_average() {
  using boost::math::quadrature::gauss_kronrod;
  // Autocorrelation of the unit cube is prod(1 - |u_i|) on [-1, 1]^3; fold
  // onto the positive octant (factor 8) and integrate z in closed form.
  auto inner = [](double x) {
    auto f = [x](double y) {
      const double rho = std::hypot(x, y);
      return rho == 0.0 ? 0.0 : (1.0 - y) * z_profile(rho);
    };
    return (1.0 - x) * gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13);
  };
  return 8.0 * gauss_kronrod<double, 61>::integrate(inner, 0.0, 1.0, 15, 1e-12);
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double cell_self_average_unit() {
  static const double value = compute_self_average();
  return value;
}

Lattice3 covering_lattice(const Vec3& lo, const Vec3& hi, double h, int pad) {
  Lattice3 lat;
  lat.h = h;
  for (int d = 0; d < 3; ++d) {
    const long first = static_cast<long>(std::floor(lo[d] / h + 1e-9)) - pad;
    const long last = static_cast<long>(std::ceil(hi[d] / h - 1e-9)) - 1 + pad;
    lat.origin[d] = (static_cast<double>(first) + 0.5) * h;
    lat.dims[d] = static_cast<int>(last - first + 1);
  }
  return lat;
}

std::vector<double> ball_fill_fraction(const Lattice3& lattice, const Vec3& center, double R,
                                       int subsamples) {
  std::vector<double> frac(lattice.size(), 0.0);
  const double h = lattice.h;
  const double half_diag = 0.5 * std::sqrt(3.0) * h;
  const double inv = 1.0 / (static_cast<double>(subsamples) * subsamples * subsamples);
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    const Vec3 c = lattice.position(idx);
    const double dist = (c - center).norm();
    if (dist + half_diag <= R) {
      frac[idx] = 1.0;
    } else if (dist - half_diag < R) {
      int inside = 0;
      for (int a = 0; a < subsamples; ++a)
        for (int b = 0; b < subsamples; ++b)
          for (int e = 0; e < subsamples; ++e) {
            const Vec3 off((a + 0.5) / subsamples - 0.5, (b + 0.5) / subsamples - 0.5,
                           (e + 0.5) / subsamples - 0.5);
            if ((c + h * off - center).squaredNorm() < R * R) ++inside;
          }
      frac[idx] = inside * inv;
    }
  }
  return frac;
}

double lattice_coulomb(const Lattice3& lattice, std::span<const double> q1,
                       std::span<const double> q2) {
  if (q1.size() != lattice.size() || q2.size() != lattice.size())
    throw std::invalid_argument("lattice_coulomb: density size does not match lattice");
  const int nx = 2 * lattice.dims[0], ny = 2 * lattice.dims[1], nz = 2 * lattice.dims[2];
  const int nzc = nz / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(nx) * ny * nz;
  const std::size_t spec_size = static_cast<std::size_t>(nx) * ny * nzc;
  const double h = lattice.h;

  std::vector<double> kern(real_size), src(real_size, 0.0);
  std::vector<std::complex<double>> kspec(spec_size), sspec(spec_size);

  auto wrap = [](int i, int n) { return i <= n / 2 ? i : i - n; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const Vec3 d(wrap(i, nx), wrap(j, ny), wrap(k, nz));
        const double r = d.norm() * h;
        kern[(static_cast<std::size_t>(i) * ny + j) * nz + k] =
            r == 0.0 ? cell_self_average(h) : 1.0 / r;
      }
  for (int i = 0; i < lattice.dims[0]; ++i)
    for (int j = 0; j < lattice.dims[1]; ++j)
      for (int k = 0; k < lattice.dims[2]; ++k)
        src[(static_cast<std::size_t>(i) * ny + j) * nz + k] = q2[lattice.index(i, j, k)];

  fftw_plan pk, ps, pb;
  {
    std::lock_guard lock(planner_mutex());
    pk = fftw_plan_dft_r2c_3d(nx, ny, nz, kern.data(), reinterpret_cast<fftw_complex*>(kspec.data()),
                              FFTW_ESTIMATE);
    ps = fftw_plan_dft_r2c_3d(nx, ny, nz, src.data(), reinterpret_cast<fftw_complex*>(sspec.data()),
                              FFTW_ESTIMATE);
    pb = fftw_plan_dft_c2r_3d(nx, ny, nz, reinterpret_cast<fftw_complex*>(sspec.data()), src.data(),
                              FFTW_ESTIMATE);
  }
  fftw_execute(pk);
  fftw_execute(ps);
  for (std::size_t i = 0; i < spec_size; ++i) sspec[i] *= kspec[i];
  fftw_execute(pb);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(pk);
    fftw_destroy_plan(ps);
    fftw_destroy_plan(pb);
  }

  const double scale = 1.0 / static_cast<double>(real_size);
  double energy = 0.0;
  for (int i = 0; i < lattice.dims[0]; ++i)
    for (int j = 0; j < lattice.dims[1]; ++j)
      for (int k = 0; k < lattice.dims[2]; ++k)
        energy += q1[lattice.index(i, j, k)] * src[(static_cast<std::size_t>(i) * ny + j) * nz + k];
  const double h3 = h * h * h;
  return energy * scale * h3 * h3;
}

}  // namespace collapse::coulomb
