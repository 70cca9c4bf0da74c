#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "collapse/core.hpp"

namespace collapse {

using Complex = std::complex<double>;

/// Complex amplitudes on a uniform periodic 1D grid, x_i = x0 + i dx.
struct GridWavefunction {
  std::vector<Complex> amplitudes;
  double x0 = 0.0;
  double dx = 1.0;

  std::size_t size() const { return amplitudes.size(); }
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double length() const { return static_cast<double>(amplitudes.size()) * dx; }
  double center() const { return x0 + 0.5 * length(); }
};

struct GridMoments {
  double xbar = 0.0;
  double pbar = 0.0;
  double sigma_sq = 0.0;
  double norm = 0.0;
};

/// <x>, <p> (spectral), Var(x) and sum |psi|^2 dx. Position moments are
/// normalized by `norm`, so they are meaningful for unnormalized states.
GridMoments moments(const GridWavefunction& wf, double hbar);
/// Norm and position moments only (pbar left at zero); no transforms.
GridMoments position_moments(const GridWavefunction& wf);

double norm_sq(const GridWavefunction& wf);
void normalize(GridWavefunction& wf);

/// Normalized Gaussian exp(-a (x - xbar)^2 + i pbar x / hbar) sampled on a
/// grid of `n` points centred on `center`.
GridWavefunction gaussian_on_grid(std::size_t n, double dx, double center, double xbar,
                                  double pbar, Complex a, double hbar);

/// In-place FFT helpers. Plans are created once per (thread, size).
namespace fft {
void forward(std::span<Complex> data);
/// Unnormalized inverse; divide by the size to undo `forward`.
void backward(std::span<Complex> data);
/// Angular wavenumbers in FFT order for a grid of `n` points with spacing `dx`.
std::vector<double> wavenumbers(std::size_t n, double dx);
}  // namespace fft

/// Split-step kinetic propagator exp(-i hbar k^2 tau / 2M) for fixed (grid, tau).
class KineticPropagator {
 public:
  KineticPropagator(std::size_t n, double dx, double tau, double M, double hbar);

  void apply(GridWavefunction& wf) const;
  double tau() const { return tau_; }

 private:
  std::vector<Complex> phases_;
  double tau_;
};

/// Shifts the window by whole cells (a rotation of the periodic array) so
/// that it is centred as closely as possible on `target`.
void recenter(GridWavefunction& wf, double target);

/// Zero-pads the window to `factor` times its size around the same centre,
/// keeping dx.
GridWavefunction widen(const GridWavefunction& wf, std::size_t factor = 2);

}  // namespace collapse
