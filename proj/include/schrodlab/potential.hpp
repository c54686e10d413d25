#pragma once
#include <functional>
#include <vector>

#include "schrodlab/field.hpp"

namespace schrodlab {

// Bounded complex potential V(x,t) (or additive forcing F(x,t); both share
// this representation). Closed forms carry analytic sup bounds; sampled data
// carries measured ones. sup_bound plays the role of the global bound L.
struct Potential {
  enum class Kind { Zero, Constant, GaussianWell, Sampled, Callable };
  Kind kind = Kind::Zero;

  cplx constant{0, 0};

  // GaussianWell: amp * exp(-|x|^2 / (2 width^2)) * cos(modulation * t)
  // (modulation == 0 means no time dependence).
  cplx well_amp{0, 0};
  double well_width = 1;
  double well_modulation = 0;

  // Sampled on grid x uniform times; linear interpolation in t, clamped at
  // the ends (queries may overhang by at most one sample interval).
  Grid grid;
  double t0 = 0, dt = 0;
  std::vector<std::vector<cplx>> slices;

  std::function<cplx(double, double, double)> fn;  // (x, y, t)

  double sup_bound = 0;  // sup |V|
  double sup_im = 0;     // sup |Im V|

  bool is_zero() const { return kind == Kind::Zero; }
  cplx eval(double x, double y, double t) const;
  // Fill a full slice at time t on the given grid (must match `grid` for
  // sampled potentials).
  void sample(const Grid& g, double t, std::vector<cplx>& out) const;
};

using Forcing = Potential;

Potential zero_potential();
Potential constant_potential(cplx value);
Potential gaussian_well(cplx amplitude, double width, double modulation = 0);
Potential sampled_potential(const Grid& g, double t0, double dt,
                            std::vector<std::vector<cplx>> slices);
Potential callable_potential(std::function<cplx(double, double, double)> fn,
                             double sup_bound, double sup_im);

}  // namespace schrodlab
