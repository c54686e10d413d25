#pragma once
#include <array>
#include <cstddef>
#include <vector>

#include "schrodlab/common.hpp"

namespace schrodlab {

// Uniform periodic grid on the box [-half_width, half_width)^dim.
struct Grid {
  int dim = 1;
  double half_width = 0;
  int n = 0;  // points per axis, even

  double spacing() const { return 2.0 * half_width / n; }
  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
  }
  double cell_volume() const {
    double v = 1;
    for (int d = 0; d < dim; ++d) v *= spacing();
    return v;
  }
  double coord(int i) const { return -half_width + spacing() * i; }

  // row-major: flat = ix * n + iy (2d); flat = ix (1d)
  std::size_t flat(int ix, int iy = 0) const {
    return dim == 1 ? static_cast<std::size_t>(ix)
                    : static_cast<std::size_t>(ix) * n + iy;
  }
  std::array<double, 2> point(std::size_t flat_idx) const {
    if (dim == 1) return {coord(static_cast<int>(flat_idx)), 0.0};
    return {coord(static_cast<int>(flat_idx) / n),
            coord(static_cast<int>(flat_idx) % n)};
  }

  // FFT-ordered wavenumbers along one axis: k_j = (pi/half_width) * f_j,
  // f_j = j for j < n/2, j - n otherwise.
  std::vector<double> wavenumbers() const;

  bool same_as(const Grid& o) const {
    return dim == o.dim && n == o.n && half_width == o.half_width;
  }
};

// Validates dim in {1,2}, half_width > 0, points_per_axis even and >= 8.
Grid make_grid(int dim, double half_width, int points_per_axis);

}  // namespace schrodlab
