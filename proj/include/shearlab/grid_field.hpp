#ifndef SHEARLAB_GRID_FIELD_HPP
#define SHEARLAB_GRID_FIELD_HPP

#include <vector>

#include "shearlab/common.hpp"

namespace shearlab {

// Real samples on the uniform (2*pi/nx, 2*pi/ny) grid, periodic indexing.
struct GridField {
  int nx = 0;
  int ny = 0;
  std::vector<double> v;

  GridField() = default;
  GridField(int nx_, int ny_)
      : nx(nx_), ny(ny_), v(static_cast<std::size_t>(nx_) * ny_, 0.0) {}

  double& at(int ix, int iy) {
    return v[static_cast<std::size_t>(wrap(iy, ny)) * nx + wrap(ix, nx)];
  }
  double at(int ix, int iy) const {
    return v[static_cast<std::size_t>(wrap(iy, ny)) * nx + wrap(ix, nx)];
  }
  double x(int ix) const { return two_pi * ix / nx; }
  double y(int iy) const { return two_pi * iy / ny; }

  double mean() const {
    return pairwise_sum(v) / static_cast<double>(v.size());
  }
  // Grid quadrature of the L2 norm: (int |f|^2)^{1/2} over [0,2pi)^2.
  double l2() const {
    double s = pairwise_sum_fn(v.size(),
                               [&](std::size_t i) { return v[i] * v[i]; });
    return two_pi * std::sqrt(s / static_cast<double>(v.size()));
  }
  double max_abs() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::fabs(a));
    return m;
  }

  static int wrap(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
  }
};

}  // namespace shearlab

#endif
