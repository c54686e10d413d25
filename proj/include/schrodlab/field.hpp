#pragma once
#include <vector>

#include "schrodlab/grid.hpp"

namespace schrodlab {

struct WaveField {
  Grid grid;
  std::vector<cplx> values;
};

WaveField make_field(const Grid& g);
bool field_finite(const WaveField& f);
double field_mass(const WaveField& f);  // h^dim * sum |u|^2

// Gaussian wave packet A * exp(-|x-c|^2/(4 width^2)) * exp(i p.(x-c)).
// width is the sigma of the |u|^2 profile: |u|^2 = A^2 exp(-|x-c|^2/(2 width^2)).
WaveField gaussian_packet(const Grid& g, double amplitude,
                          const std::array<double, 2>& center, double width,
                          const std::array<double, 2>& momentum);

// Uniformly sampled trajectory: slice k holds u(., t0 + k*dt).
struct Trajectory {
  Grid grid;
  double t0 = 0;
  double dt = 0;
  std::vector<std::vector<cplx>> slices;

  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
  double t_end() const { return time(slices.empty() ? 0 : slices.size() - 1); }
  WaveField field(std::size_t k) const { return WaveField{grid, slices[k]}; }
};

}  // namespace schrodlab
