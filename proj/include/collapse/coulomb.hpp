#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "collapse/core.hpp"

namespace collapse::coulomb {

/// (1/h^6) times the double integral of 1/|r - s| over a cube of side h with
/// itself, for h = 1. Evaluated once by quadrature.
double cell_self_average_unit();

inline double cell_self_average(double h) { return cell_self_average_unit() / h; }

/// Regularized 1/|r - s|: point kernel between distinct nodes, cell
/// self-average on the diagonal.
inline double kernel(const Vec3& a, const Vec3& b, double h) {
  const double d = (a - b).norm();
  return d == 0.0 ? cell_self_average(h) : 1.0 / d;
}

/// Regular box of cubic cells; node (i, j, k) sits at the cell centre
/// origin + h (i, j, k).
struct Lattice3 {
  Vec3 origin = Vec3::Zero();
  double h = 1.0;
  std::array<int, 3> dims{0, 0, 0};

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k;
  }
  std::array<int, 3> coords(std::size_t idx) const {
    const int k = static_cast<int>(idx % dims[2]);
    const int j = static_cast<int>((idx / dims[2]) % dims[1]);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(dims[1]) * dims[2]));
    return {i, j, k};
  }
  Vec3 position(std::size_t idx) const {
    const auto c = coords(idx);
    return origin + h * Vec3(c[0], c[1], c[2]);
  }
  bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < dims[0] && j < dims[1] && k < dims[2];
  }
};

/// Smallest lattice with spacing h whose cells cover the axis-aligned box
/// [lo, hi] plus `pad` extra cells on every side. Cell centres are placed on
/// the grid h (n + 1/2) so balls centred on lattice planes are symmetric.
Lattice3 covering_lattice(const Vec3& lo, const Vec3& hi, double h, int pad = 1);

/// Fraction of each cell's volume inside the ball |r - center| < R, by
/// `subsamples`^3 midpoint sampling of cells that straddle the surface.
std::vector<double> ball_fill_fraction(const Lattice3& lattice, const Vec3& center, double R,
                                       int subsamples = 8);

/// sum_ab q1_a q2_b k_ab h^6 for cell densities q1, q2 on `lattice`, by
/// zero-padded FFT convolution.
double lattice_coulomb(const Lattice3& lattice, std::span<const double> q1,
                       std::span<const double> q2);

}  // namespace collapse::coulomb
