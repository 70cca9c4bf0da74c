#include "collapse/grid.hpp"

#include <fftw3.h>

#include "collapse/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace collapse {

namespace fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit PlanPair(std::size_t n) {
    std::vector<Complex> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(planner_mutex());
    const int size = static_cast<int>(n);
    forward = fftw_plan_dft_1d(size, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward = fftw_plan_dft_1d(size, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~PlanPair() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
};

const PlanPair& plans_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

}  // namespace

void forward(std::span<Complex> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(data.size()).forward, buf, buf);
}

void backward(std::span<Complex> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(data.size()).backward, buf, buf);
}

std::vector<double> wavenumbers(std::size_t n, double dx) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<long>(i);
    const long m = j < static_cast<long>((n + 1) / 2) ? j : j - static_cast<long>(n);
    k[i] = dk * static_cast<double>(m);
  }
  return k;
}

}  // namespace fft

double norm_sq(const GridWavefunction& wf) {
  double s = 0.0;
  for (const auto& c : wf.amplitudes) s += std::norm(c);
  return s * wf.dx;
}

void normalize(GridWavefunction& wf) {
  const double scale = 1.0 / std::sqrt(norm_sq(wf));
  for (auto& c : wf.amplitudes) c *= scale;
}

GridMoments moments(const GridWavefunction& wf, double hbar) {
  GridMoments m;
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < wf.size(); ++i) {
    const double w = std::norm(wf.amplitudes[i]);
    s0 += w;
    s1 += w * wf.x(i);
  }
  m.norm = s0 * wf.dx;
  m.xbar = s1 / s0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < wf.size(); ++i) {
    const double u = wf.x(i) - m.xbar;
    s2 += std::norm(wf.amplitudes[i]) * u * u;
  }
  m.sigma_sq = s2 / s0;

  std::vector<Complex> spectrum(wf.amplitudes);
  fft::forward(spectrum);
  const auto k = fft::wavenumbers(wf.size(), wf.dx);
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double w = std::norm(spectrum[i]);
    p0 += w;
    p1 += w * k[i];
  }
  m.pbar = hbar * p1 / p0;
  return m;
}

GridWavefunction gaussian_on_grid(std::size_t n, double dx, double center, double xbar,
                                  double pbar, Complex a, double hbar) {
  GridWavefunction wf;
  wf.dx = dx;
  wf.x0 = center - 0.5 * static_cast<double>(n) * dx;
  wf.amplitudes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = wf.x(i);
    const double u = x - xbar;
    wf.amplitudes[i] = std::exp(-a * u * u + Complex(0.0, pbar * x / hbar));
  }
  normalize(wf);
  return wf;
}

KineticPropagator::KineticPropagator(std::size_t n, double dx, double tau, double M, double hbar)
    : phases_(n), tau_(tau) {
  const auto k = fft::wavenumbers(n, dx);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    phases_[i] = std::polar(inv_n, -hbar * k[i] * k[i] * tau / (2.0 * M));
}

void KineticPropagator::apply(GridWavefunction& wf) const {
  fft::forward(wf.amplitudes);
  for (std::size_t i = 0; i < phases_.size(); ++i) wf.amplitudes[i] *= phases_[i];
  fft::backward(wf.amplitudes);
}

void recenter(GridWavefunction& wf, double target) {
  const long shift = std::lround((target - wf.center()) / wf.dx);
  if (shift == 0) return;
  const long n = static_cast<long>(wf.size());
  const long s = ((shift % n) + n) % n;
  std::rotate(wf.amplitudes.begin(), wf.amplitudes.begin() + s, wf.amplitudes.end());
  wf.x0 += static_cast<double>(shift) * wf.dx;
}

GridMoments position_moments(const GridWavefunction& wf) {
  GridMoments m;
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < wf.size(); ++i) {
    const double w = std::norm(wf.amplitudes[i]);
    s0 += w;
    s1 += w * wf.x(i);
  }
  m.norm = s0 * wf.dx;
  m.xbar = s1 / s0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < wf.size(); ++i) {
    const double u = wf.x(i) - m.xbar;
    s2 += std::norm(wf.amplitudes[i]) * u * u;
  }
  m.sigma_sq = s2 / s0;
  return m;
}


GridWavefunction widen(const GridWavefunction& wf, std::size_t factor) {
  if (factor < 1) throw Error(ErrorKind::invalid_parameter, "widening factor must be at least 1");
  const std::size_t n = wf.size();
  const std::size_t pad = (factor - 1) * n / 2;
  GridWavefunction out;
  out.dx = wf.dx;
  out.x0 = wf.x0 - static_cast<double>(pad) * wf.dx;
  out.amplitudes.assign(factor * n, Complex{0.0, 0.0});
  std::copy(wf.amplitudes.begin(), wf.amplitudes.end(), out.amplitudes.begin() + static_cast<std::ptrdiff_t>(pad));
  return out;
}

}  // namespace collapse
