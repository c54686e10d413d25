#include "schrodlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "schrodlab/field.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(n);
  const double base = kPi / half_width;
  for (int j = 0; j < n; ++j) {
    int f = j < n / 2 ? j : j - n;
    k[j] = base * f;
  }
  return k;
}

Grid make_grid(int dim, double half_width, int points_per_axis) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("make_grid: dim must be 1 or 2, got " +
                                std::to_string(dim));
  if (!(half_width > 0))
    throw std::invalid_argument("make_grid: half_width must be positive");
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw std::invalid_argument(
        "make_grid: points_per_axis must be even and at least 8, got " +
        std::to_string(points_per_axis));
  return Grid{dim, half_width, points_per_axis};
}

WaveField make_field(const Grid& g) {
  return WaveField{g, std::vector<cplx>(g.size(), cplx{0, 0})};
}

bool field_finite(const WaveField& f) {
  for (const cplx& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double field_mass(const WaveField& f) {
  std::vector<double> cells(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    cells[i] = std::norm(f.values[i]);
  return f.grid.cell_volume() * pairwise_sum(cells);
}

WaveField gaussian_packet(const Grid& g, double amplitude,
                          const std::array<double, 2>& center, double width,
                          const std::array<double, 2>& momentum) {
  if (!(width > 0))
    throw std::invalid_argument("gaussian_packet: width must be positive");
  WaveField f = make_field(g);
  const double inv = 1.0 / (4.0 * width * width);
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    double dx = p[0] - center[0];
    double dy = g.dim == 2 ? p[1] - center[1] : 0.0;
    double r2 = dx * dx + dy * dy;
    double phase = momentum[0] * dx + (g.dim == 2 ? momentum[1] * dy : 0.0);
    f.values[i] = amplitude * std::exp(-r2 * inv) *
                  std::exp(cplx(0, 1) * phase);
  }
  return f;
}

}  // namespace schrodlab
