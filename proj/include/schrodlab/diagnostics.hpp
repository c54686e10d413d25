#pragma once
#include <functional>

#include "schrodlab/field.hpp"
#include "schrodlab/observability.hpp"
#include "schrodlab/potential.hpp"

namespace schrodlab {

// Mass-flux balance: with flux q = conj(u) grad u,
//   int w (|u(t)|^2 - |u0|^2) dx
//     = -2 Im int_0^t [ int w div q + int w V |u|^2 ] dx ds
//     =  2 Im int_0^t [ int grad w . q ] - 2 Im int_0^t int w V |u|^2
// (the divergence is moved onto the weight; with w = 1 the flux term drops).
// Returns lhs, rhs and their difference relative to the initial mass scale.
struct MassIdentityResult {
  double lhs = 0;
  double rhs = 0;
  double residual = 0;  // |lhs - rhs|
  double relative = 0;  // residual / max(initial mass, 1e-300)
};
MassIdentityResult mass_identity_residual(
    const Trajectory& u, const Potential& V, double t,
    const std::function<double(double, double)>& weight = {},
    const std::function<std::array<double, 2>(double, double)>& weight_grad = {});

// Pointwise (L^1 in x) version of the same balance at time t.
struct PointwiseMassResult {
  double l1_residual = 0;
  double scale = 0;     // L^1 norm of |u(t)|^2
  double relative = 0;
};
PointwiseMassResult mass_identity_pointwise(const Trajectory& u,
                                            const Potential& V, double t);

// End-to-end accounting of the weighted lower-bound chain at dilation ratio
// gamma, all on the source trajectory side (y-space): the windowed mass
// transfer B with its flux part B1 and potential part B2, the initial-mass
// floor, and the window/gradient energies I1 (split I11 + I12) and I2 against
// their closed-form ceilings. cond2/cond3/cond4 are the three acceptance
// inequalities of the assembled estimate, evaluated in log scale at
// sigma = sigma_mult * cn * R^2. Pass flags compare measured quantities to
// ceilings; admissibility records gamma >= gamma_min.
struct ProofChainReport {
  double gamma = 0, R0 = 0, R = 0;
  bool admissible = false;
  double gamma_min = 0;
  bool skipped_zero_data = false;

  double B = 0, B1 = 0, B2 = 0;
  double B_scaled = 0;       // gamma * B
  double B_bound = 0;        // 16 A^2 / sqrt(gamma)
  double B1_bound = 0;       // 8 A^2 / gamma^{3/2}
  double B1_bound_band = 0;  // same shape with the banded constant A_band
  double B2_bound = 0;       // 8 A^2 L / gamma^2
  double triangle_gap = 0;   // B - (B1 + B2), should be <= ~solver error
  double A_band_sq = 0;      // sup over outer window of H^1 mass in |y| <= 4 R0

  double floor_lhs = 0;  // gamma * int_inner int theta^2 |u0|^2
  double floor_rhs = 0;  // c0^2 / 4

  double I1 = 0, I11 = 0, I12 = 0;
  double I1_bound = 0;  // 216 A^2
  double I2 = 0;
  double I2_bound = 0;  // 32 gamma^2 R0^2 * banded integral
  double band_integral = 0;

  bool pass_B = false, pass_B1 = false, pass_B2 = false;
  bool pass_floor = false, pass_I1 = false, pass_I2 = false;

  double sigma = 0, cn = 0;
  bool cond2 = false, cond3 = false, cond4 = false;
  double cond2_lhs_log = 0, cond2_rhs_log = 0;
  double cond3_lhs_log = 0, cond3_rhs_log = 0;
  double cond4_lhs_log = 0, cond4_rhs_log = 0;

  bool all_pass = false;
};

ProofChainReport proof_chain_diagnostics(const Trajectory& u, const Potential& V,
                                         double gamma, double R0,
                                         const ObservabilityConstants& consts,
                                         int smoothness_order = 4,
                                         double cn = 1.0 / 64.0,
                                         double sigma_mult = 64.0);

}  // namespace schrodlab
