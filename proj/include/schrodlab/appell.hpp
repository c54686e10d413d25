#pragma once
#include "schrodlab/field.hpp"
#include "schrodlab/potential.hpp"

namespace schrodlab {

// Time-dependent change of variables mapping solutions of the free/potential
// Schrodinger equation to solutions with rescaled time and space. With
// weights (a, b) > 0 and D(t) = a(1-t) + b t, m(t) = sqrt(ab)/D(t):
//   (T u)(x, t) = m(t)^{n/2} u(m(t) x, b t / D(t)) exp(-i (a-b) |x|^2 / (4 D(t)))
// The normalized family uses a = sqrt(gamma), b = 1/sqrt(gamma), so ab = 1,
// m = alpha_of_t, and the phase coefficient is beta_of_t/4. Swapping (a, b)
// gives the inverse map.
struct AppellWeights {
  double a = 1, b = 1;
};
AppellWeights normalized_weights(double gamma);  // (sqrt(g), 1/sqrt(g))
AppellWeights inverse_weights(const AppellWeights& w);

struct TransformSpec {
  AppellWeights weights;
  Grid out_grid;
  double out_t0 = 0;
  double out_dt = 0;
  int out_slices = 0;  // number of stored slices in the output trajectory
};

// Evaluates (T u) on the requested slice times. The source trajectory is
// read with barycentric-free plain trigonometric interpolation in space and
// 4-point cubic interpolation in time; both source coverage and the dilated
// sample points staying inside the source box are validated.
Trajectory appell_transform(const Trajectory& u, const TransformSpec& spec);
Trajectory appell_transform(const Trajectory& u, double gamma,
                            const Grid& out_grid, double out_t0, double out_dt,
                            int out_slices);

// Transformed coefficients: (T V)(x,t) = (ab/D^2) V(m x, s(t)) and
// (T F)(x,t) = m^{n/2+2} F(m x, s(t)) e^{-i(a-b)|x|^2/(4D)}. Both come back
// as sampled data on the output slices with measured sup bounds.
Potential transform_potential(const Potential& V, const TransformSpec& spec);
Forcing transform_forcing(const Forcing& F, const TransformSpec& spec);

// Relative interior residual of d/dt u = i(Lap u + V u + F) measured with a
// 4th-order centered time stencil on the stored slices; used to certify that
// transformed triples still solve the equation.
struct ResidualReport {
  double absolute = 0;   // space-time L2 of the residual, interior slices
  double reference = 0;  // space-time L2 of i(Lap u + V u + F)
  double relative = 0;
};
ResidualReport schrodinger_residual(const Trajectory& u, const Potential& V,
                                    const Forcing& F);

}  // namespace schrodlab
