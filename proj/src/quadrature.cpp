#include "schrodlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "schrodlab/spectral.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {

Region region_all() {
  return [](double, double) { return true; };
}

Region region_ball(double radius, double cx, double cy) {
  return [=](double x, double y) {
    double dx = x - cx, dy = y - cy;
    return dx * dx + dy * dy <= radius * radius;
  };
}

Region region_annulus(double r_lo, double r_hi) {
  return [=](double x, double y) {
    double r = std::hypot(x, y);
    return r > r_lo && r < r_hi;
  };
}

Region region_band(double center, double half_width) {
  return [=](double x, double y) {
    return std::abs(std::hypot(x, y) - center) < half_width;
  };
}

namespace {

// Masked pairwise sum in fixed grid order, scaled by the cell volume.
double masked_sum(const Grid& g, const std::vector<double>& cells,
                  const Region& region) {
  std::vector<double> kept;
  kept.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto p = g.point(i);
    if (region(p[0], p[1])) kept.push_back(cells[i]);
  }
  if (kept.empty()) return 0.0;
  return g.cell_volume() * pairwise_sum(kept);
}

}  // namespace

double quadrature_density(const WaveField& u, const Region& region) {
  std::vector<double> cells(u.values.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    cells[i] = std::norm(u.values[i]);
  return masked_sum(u.grid, cells, region);
}

double quadrature_gradient_density(const WaveField& u, const Region& region) {
  return masked_sum(u.grid, gradient_density(u.grid, u.values), region);
}

cplx quadrature_inner(const WaveField& u, const WaveField& w,
                      const Region& region) {
  if (!u.grid.same_as(w.grid))
    throw std::invalid_argument("quadrature_inner: fields on different grids");
  std::vector<cplx> kept;
  kept.reserve(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    auto p = u.grid.point(i);
    if (region(p[0], p[1])) kept.push_back(u.values[i] * std::conj(w.values[i]));
  }
  if (kept.empty()) return cplx{0, 0};
  return u.grid.cell_volume() * pairwise_sum(kept);
}

double quadrature_pointwise(const Grid& g, const std::vector<double>& cell_values,
                            const Region& region) {
  if (cell_values.size() != g.size())
    throw std::invalid_argument("quadrature_pointwise: size mismatch");
  return masked_sum(g, cell_values, region);
}

}  // namespace schrodlab
