#pragma once
#include <functional>

#include "schrodlab/field.hpp"
#include "schrodlab/potential.hpp"

namespace schrodlab {

// Second-order Strang split step for  du/dt = i (Lap u + V(x,t) u + F(x,t)):
// half a potential+forcing substep frozen at t + dt/4, an exact spectral
// kinetic step over dt, then the second half frozen at t + 3dt/4. The
// potential substep solves u' = i(Vu + F) exactly for frozen coefficients,
// u <- e^{z} u + i (dt/2) phi1(z) F with z = i V dt/2, phi1(z) = (e^z - 1)/z.
WaveField step_strang(const WaveField& u, const Potential& V, const Forcing& F,
                      double t, double dt);

// Repeated Strang steps from t = 0 to t_end; dt must divide t_end to 1e-9
// relative. Stores every store_stride-th slice (including u0 and the final
// state). Guards: dt * sup|Im V| <= 0.1 (complex gain stability), all stored
// slices finite, and stored-slice mass within 3 cells of the box edge below
// 1e-8 of the total (otherwise the box is too small for the scenario).
Trajectory solve(const WaveField& u0, const Potential& V, const Forcing& F,
                 double t_end, double dt, int store_stride = 1);

// Exact free evolution u <- exp(i t Lap) u; any real t (t = 0 is identity).
WaveField free_propagate(const WaveField& u, double t);

// Splitting for du/dt = i (Lap u + f(|u|^2) u), f real with f(0) = 0:
// pointwise exact phase e^{i (dt/2) f(|u|^2)} around the spectral kinetic step.
Trajectory solve_nls(const WaveField& u0, const std::function<double(double)>& f,
                     double t_end, double dt, int store_stride = 1);

// Difference potential turning the NLS pair (u1, u2) into data for the linear
// problem solved by w = u1 - u2:  V_eff = (f(|u1|^2) u1 - f(|u2|^2) u2) / w
// where |w| >= floor, and 0 on the floor layer. floor_fraction reports the
// excluded share of space-time cells.
struct NlsDifference {
  Potential potential;
  double floor_fraction = 0;
};
NlsDifference nls_difference_potential(const Trajectory& u1,
                                       const Trajectory& u2,
                                       const std::function<double(double)>& f,
                                       double floor);

// Relative residual of d/dt w = i(Lap w + V w) over interior stored slices
// (4th-order centered time stencil), with the floor layer excluded from both
// norms. Adjudicates the difference-potential construction.
double nls_difference_residual(const Trajectory& u1, const Trajectory& u2,
                               const NlsDifference& diff, double floor);

}  // namespace schrodlab
