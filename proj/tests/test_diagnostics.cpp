#include <doctest.h>

#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <schrodlab/diagnostics.hpp>
#include <schrodlab/field.hpp>
#include <schrodlab/grid.hpp>
#include <schrodlab/observability.hpp>
#include <schrodlab/potential.hpp>
#include <schrodlab/propagator.hpp>

using namespace schrodlab;

namespace {

Trajectory evolve(const Potential& V, double dt, double t_end, int stride,
                  double width = 1.0, double momentum = 0.0) {
  Grid g = make_grid(1, 16.0, 256);
  WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, width, {momentum, 0});
  return solve(u0, V, zero_potential(), t_end, dt, stride);
}

Trajectory scale_slices(const Trajectory& tr, cplx factor) {
  Trajectory out = tr;
  for (auto& s : out.slices)
    for (auto& z : s) z *= factor;
  return out;
}

}  // namespace

TEST_CASE("mass balance: free evolution conserves, imaginary part drains") {
  Trajectory free_tr = evolve(zero_potential(), 5e-4, 0.2, 1);
  MassIdentityResult r0 = mass_identity_residual(free_tr, zero_potential(), 0.2);
  CHECK(r0.rhs == 0.0);
  CHECK(r0.relative <= 1e-12);

  // V = 0.25i: mass decays like exp(-0.5 t), and the balance closes to
  // time-quadrature accuracy
  Potential Vi = constant_potential(cplx(0, 0.25));
  Trajectory tr = evolve(Vi, 5e-4, 0.2, 1);
  MassIdentityResult r = mass_identity_residual(tr, Vi, 0.2);
  CHECK(r.lhs < 0.0);
  CHECK(r.rhs < 0.0);
  CHECK(r.relative <= 1e-6);
  const double mass0 = 2.5066282746310002;  // sqrt(2 pi)
  CHECK(r.lhs ==
        doctest::Approx(mass0 * (std::exp(-0.5 * 0.2) - 1.0)).epsilon(1e-8));

  // a real potential contributes nothing to the unweighted balance
  Potential Vr = gaussian_well(0.3, 1.5, 0.0);
  Trajectory tr_r = evolve(Vr, 5e-4, 0.2, 4);
  MassIdentityResult rr = mass_identity_residual(tr_r, Vr, 0.2);
  CHECK(rr.rhs == 0.0);
  CHECK(rr.relative <= 1e-10);
}

TEST_CASE("pointwise balance residual shrinks at second order in dt") {
  Potential V = gaussian_well(cplx(0.3, 0.2), 1.5, 0.0);
  double res[2];
  int i = 0;
  for (double dt : {1e-3, 5e-4}) {
    Trajectory tr = evolve(V, dt, 0.2, 1);
    PointwiseMassResult p = mass_identity_pointwise(tr, V, 0.2);
    CHECK(p.scale > 1.0);
    res[i++] = p.relative;
  }
  CHECK(res[0] / res[1] >= 3.0);
  CHECK(res[0] / res[1] <= 5.0);
}

TEST_CASE("balance is invariant under a global phase") {
  auto w = [](double x, double) { return std::exp(-x * x / 8.0); };
  auto wg = [](double x, double) -> std::array<double, 2> {
    return {-(x / 4.0) * std::exp(-x * x / 8.0), 0.0};
  };
  Potential V = gaussian_well(cplx(0.2, 0.1), 2.0, 0.0);
  Trajectory tr = evolve(V, 5e-4, 0.1, 2, 0.9, 0.6);
  Trajectory tr_i = scale_slices(tr, cplx(0, 1));
  MassIdentityResult a = mass_identity_residual(tr, V, 0.1, w, wg);
  MassIdentityResult b = mass_identity_residual(tr_i, V, 0.1, w, wg);
  CHECK(a.lhs == b.lhs);  // |i u|^2 is |u|^2 exactly
  CHECK(b.rhs == doctest::Approx(a.rhs).epsilon(1e-13));
}

TEST_CASE("weighted balance closes for a moving packet") {
  auto w = [](double x, double) { return std::exp(-x * x / 8.0); };
  auto wg = [](double x, double) -> std::array<double, 2> {
    return {-(x / 4.0) * std::exp(-x * x / 8.0), 0.0};
  };
  Trajectory tr = evolve(zero_potential(), 5e-4, 0.2, 4, 0.9, 0.6);
  MassIdentityResult r =
      mass_identity_residual(tr, zero_potential(), 0.2, w, wg);
  CHECK(std::abs(r.lhs) > 1e-3);  // the packet really does leave the window
  CHECK(r.relative <= 1e-5);

  CHECK_THROWS_AS(mass_identity_residual(tr, zero_potential(), 0.2, w),
                  std::invalid_argument);
}

TEST_CASE("balance scales quadratically with the field amplitude") {
  Potential V = constant_potential(cplx(0.1, 0.05));
  Trajectory tr = evolve(V, 5e-4, 0.1, 2);
  Trajectory tr3 = scale_slices(tr, cplx(3, 0));
  MassIdentityResult a = mass_identity_residual(tr, V, 0.1);
  MassIdentityResult b = mass_identity_residual(tr3, V, 0.1);
  CHECK(b.lhs == doctest::Approx(9.0 * a.lhs).epsilon(1e-14));
  CHECK(b.rhs == doctest::Approx(9.0 * a.rhs).epsilon(1e-13));
}

TEST_CASE("balance rejects times off the stored lattice") {
  Trajectory tr = evolve(zero_potential(), 5e-4, 0.1, 2);
  CHECK_THROWS_AS(mass_identity_residual(tr, zero_potential(), 0.0123456),
                  std::invalid_argument);
  CHECK_THROWS_AS(mass_identity_residual(tr, zero_potential(), 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(mass_identity_pointwise(tr, zero_potential(), 0.0123456),
                  std::invalid_argument);
}

TEST_CASE("chain accounting: zero data short-circuits, bad gamma throws") {
  Grid g = make_grid(1, 16.0, 64);
  Trajectory z;
  z.grid = g;
  z.t0 = 0;
  z.dt = 1e-3;
  z.slices.assign(8, std::vector<cplx>(g.size(), cplx(0, 0)));

  ObservabilityConstants cz;
  cz.zero_data = true;
  ProofChainReport rep = proof_chain_diagnostics(z, zero_potential(), 17.0,
                                                 1.0, cz);
  CHECK(rep.skipped_zero_data);
  CHECK(rep.all_pass);

  ObservabilityConstants c1;
  c1.c0_sq = 1.0;
  c1.A_sq = 1.0;
  c1.L = 0.0;
  c1.R0 = 1.0;
  c1.M = 5.0;
  CHECK_THROWS_AS(proof_chain_diagnostics(z, zero_potential(), 16.0, 1.0, c1),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      proof_chain_diagnostics(z, zero_potential(), 17.0, 1.0, c1),
      doctest::Contains("below the admissible threshold"),
      std::invalid_argument);
}

TEST_CASE("chain accounting closes end to end on a driven Gaussian") {
  Grid g = make_grid(1, 16.0, 2048);
  WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});
  Potential V = gaussian_well(cplx(0.3, 0.4), std::sqrt(2.0), 0.0);
  Trajectory tr = solve(u0, V, zero_potential(), 1.3e-4, 1e-7, 1);

  ObservabilityConstants c = compute_constants(tr, V, 3.0, 13.0);
  CHECK(c.L == doctest::Approx(0.5).epsilon(1e-14));
  // sqrt(2 pi) erf(3 / sqrt(2))
  CHECK(c.c0_sq == doctest::Approx(2.4998592).epsilon(1e-3));
  CHECK(c.A_sq == doctest::Approx(3.1332853).epsilon(2e-3));

  const double gamma = 26000.0;
  ProofChainReport rep = proof_chain_diagnostics(tr, V, gamma, 3.0, c);
  CHECK(rep.admissible);
  CHECK(rep.gamma_min < gamma);
  CHECK(rep.gamma_min > 25000.0);
  CHECK(rep.R == doctest::Approx(3.0 * std::sqrt(gamma)));

  // mass transfer and its flux/potential split
  CHECK(rep.pass_B);
  CHECK(rep.pass_B1);
  CHECK(rep.pass_B2);
  CHECK(rep.triangle_gap <= 1e-10);
  CHECK(rep.B >= 0.0);
  CHECK(rep.B_scaled <= rep.B_bound);

  // initial-mass floor and the window/annulus energies
  CHECK(rep.pass_floor);
  CHECK(rep.floor_lhs >= rep.floor_rhs);
  CHECK(rep.pass_I1);
  CHECK(rep.I1 == rep.I11 + rep.I12);
  CHECK(rep.I1 > 0.0);
  CHECK(rep.pass_I2);
  CHECK(rep.band_integral > 0.0);

  // assembled-estimate conditions in log scale
  CHECK(rep.cond2);
  CHECK(rep.cond3);
  CHECK(rep.cond4);
  CHECK(rep.all_pass);
}
