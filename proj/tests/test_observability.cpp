#include <doctest.h>

#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <schrodlab/field.hpp>
#include <schrodlab/grid.hpp>
#include <schrodlab/observability.hpp>
#include <schrodlab/potential.hpp>
#include <schrodlab/propagator.hpp>

using namespace schrodlab;

namespace {

Trajectory short_free_gaussian() {
  Grid g = make_grid(1, 30.0, 1024);
  WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});
  return solve(u0, zero_potential(), zero_potential(), 0.04, 1e-4, 10);
}

Trajectory zero_traj(int n_slices, double dt_store) {
  Grid g = make_grid(1, 20.0, 512);
  Trajectory tr;
  tr.grid = g;
  tr.t0 = 0;
  tr.dt = dt_store;
  tr.slices.assign(n_slices, std::vector<cplx>(g.size(), cplx(0, 0)));
  return tr;
}

}  // namespace

TEST_CASE("scenario constants against the error-function oracle") {
  Grid g = make_grid(1, 24.0, 2048);
  WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});
  Trajectory tr = solve(u0, zero_potential(), zero_potential(), 1e-3, 1e-5, 10);
  ObservabilityConstants c = compute_constants(tr, zero_potential(), 2.0, 9.0);

  // |u0|^2 = exp(-x^2/2): mass in [-2, 2] is sqrt(2 pi) erf(sqrt(2))
  const double oracle =
      2.5066282746310002 * std::erf(std::sqrt(2.0));
  CHECK(c.c0_sq == doctest::Approx(oracle).epsilon(2e-3));
  // H^1 mass of the packet: sqrt(2 pi) (1 + 1/4)
  CHECK(c.A_sq == doctest::Approx(3.1332853432887503).epsilon(1e-3));
  CHECK(c.A_sq >= c.c0_sq);
  CHECK(c.L == 0.0);
  CHECK(c.R0 == 2.0);
  CHECK(c.M == 9.0);
  CHECK(!c.zero_data);

  // with L = 0 only the 2^-14 (c0/A)^4 and R0^2 arguments remain
  double expect_tstar =
      std::min(std::pow(2.0, -14) * std::pow(c.c0_sq / c.A_sq, 2.0),
               c.R0 * c.R0);
  CHECK(t_star(c) == doctest::Approx(expect_tstar).epsilon(1e-12));

  CHECK_THROWS_AS(compute_constants(tr, zero_potential(), 2.0, 8.9),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_constants(tr, zero_potential(), 2.0, 25.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_constants(tr, zero_potential(), 0.0, 9.0),
                  std::invalid_argument);

  // the potential bound feeds straight into L
  ObservabilityConstants cv =
      compute_constants(tr, constant_potential(cplx(0.03, 0.01)), 2.0, 9.0);
  CHECK(cv.L == doctest::Approx(std::abs(cplx(0.03, 0.01))).epsilon(1e-14));
}

TEST_CASE("t_star picks the smallest admissible time scale") {
  ObservabilityConstants c;
  c.c0_sq = 1.0;
  c.A_sq = 1.0;
  c.L = 2.0;
  c.R0 = 10.0;
  // candidates: 256/2 = 128, 2^-14, 100, 1/4
  CHECK(t_star(c) == doctest::Approx(std::pow(2.0, -14)).epsilon(1e-14));

  c.L = 1000.0;
  // now 1/L^2 = 1e-6 wins
  CHECK(t_star(c) == doctest::Approx(1e-6).epsilon(1e-12));

  c.zero_data = true;
  CHECK(t_star(c) == 0.0);
}

TEST_CASE("region measure: exact band sizes, box checks, periodic wrap") {
  Grid g = make_grid(1, 20.0, 256);
  RegionQuery q;
  q.rho = 2.0;
  q.t = 0.25;
  // band half-width 4 * 2 * 0.5 = 4
  CHECK(region_measure(g, q, 0.0625) == 13.0);  // center 2.5, clipped at 0
  CHECK(region_measure(g, q, 0.75) == 16.0);    // center 8, interior
  CHECK(region_measure(g, q, 0.5) == 16.0);     // width independent of center
  RegionQuery far = q;
  far.rho = 4.0;
  CHECK_THROWS_AS(region_measure(g, far, 0.75), std::invalid_argument);

  Grid g2 = make_grid(2, 10.0, 64);
  RegionQuery q2;
  q2.rho = 1.0;
  q2.t = 0.25;
  // center 4, annulus radii [2, 6]
  CHECK(region_measure(g2, q2, 0.75) == doctest::Approx(32.0 * kPi));

  Grid torus = make_grid(1, kPi, 64);
  RegionQuery qp;
  qp.rho = 0.1;
  qp.t = 0.25;
  qp.periodic = true;
  // centers +-0.05, half-width 0.2: arcs overlap near zero
  // union = 4*0.2 - 2*(0.2 - 0.05)
  CHECK(region_measure(torus, qp, 0.125) == doctest::Approx(0.5));
  // a wide band saturates the whole circle
  RegionQuery qw = qp;
  qw.rho = 3.0;
  CHECK(region_measure(torus, qw, 0.75) == doctest::Approx(2.0 * kPi));
}

TEST_CASE("functional: zero data, split parts, window alignment") {
  Trajectory z = zero_traj(41, 1e-3);
  ObservabilityEvaluator ev(z);
  RegionQuery q;
  q.rho = 2.0;
  q.t = 0.008;
  JResult r = ev.functional(q);
  CHECK(r.J == 0.0);
  CHECK(r.J_mass == 0.0);
  CHECK(r.J_grad == 0.0);
  CHECK(r.slices_used == 23);  // slices 2 .. 24

  // t/4 must land on the stored lattice and 3t inside the range
  RegionQuery bad = q;
  bad.t = 0.0033;
  CHECK_THROWS_AS(ev.functional(bad), std::invalid_argument);
  bad.t = 0.02;  // 3t = 0.06 beyond the last slice
  CHECK_THROWS_AS(ev.functional(bad), std::invalid_argument);
  // a band of fewer than 8 cells is refused
  bad = q;
  bad.rho = 0.25;
  bad.t = 0.004;
  CHECK_THROWS_AS(ev.functional(bad), std::invalid_argument);
}

TEST_CASE("functional decays in rho and splits into mass + gradient parts") {
  Trajectory tr = short_free_gaussian();
  ObservabilityEvaluator ev(tr);
  double prev = 0;
  bool first = true;
  for (double rho : {3.0, 4.0, 5.0}) {
    RegionQuery q;
    q.rho = rho;
    q.t = 0.012;
    JResult r = ev.functional(q);
    CHECK(r.J > 0.0);
    CHECK(r.J == doctest::Approx(r.J_mass + r.J_grad).epsilon(1e-14));
    if (!first) CHECK(r.J < prev);
    prev = r.J;
    first = false;
  }
}

TEST_CASE("functional is stable under grid refinement") {
  RegionQuery q;
  q.rho = 3.0;
  q.t = 0.012;
  Grid g1 = make_grid(1, 30.0, 1024);
  Grid g2 = make_grid(1, 30.0, 2048);
  double J[2];
  int i = 0;
  for (const Grid& g : {g1, g2}) {
    WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});
    Trajectory tr =
        solve(u0, zero_potential(), zero_potential(), 0.04, 1e-4, 10);
    J[i++] = observability_functional(tr, q).J;
  }
  // sharp band edges make the cell sum first-order at the boundary
  CHECK(std::abs(J[1] - J[0]) <= 0.05 * J[1]);
}

TEST_CASE("decay fit recovers synthetic exponents exactly") {
  std::vector<RegionQuery> qs;
  std::vector<double> J;
  for (int i = 0; i < 8; ++i) {
    RegionQuery q;
    q.rho = 1.0 + 0.5 * i;
    q.t = 1.0;
    qs.push_back(q);
    J.push_back(7.0 * std::exp(-3.0 * q.rho * q.rho / q.t));
  }
  FitResult f = decay_fit(qs, J);
  CHECK(f.n == 8);
  CHECK(f.slope == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-10));
  CHECK(f.r_sq == doctest::Approx(1.0).epsilon(1e-12));

  // constant data: slope 0, conventionally a perfect fit
  std::vector<double> Jc(8, 5.0);
  FitResult fc = decay_fit(qs, Jc);
  CHECK(fc.slope == doctest::Approx(0.0));
  CHECK(fc.r_sq == doctest::Approx(1.0));

  std::vector<RegionQuery> few(qs.begin(), qs.begin() + 4);
  std::vector<double> Jfew(J.begin(), J.begin() + 4);
  CHECK_THROWS_AS(decay_fit(few, Jfew), std::invalid_argument);
  std::vector<double> Jbad = J;
  Jbad[3] = 0.0;
  CHECK_THROWS_AS(decay_fit(qs, Jbad), std::invalid_argument);
  Jbad = J;
  Jbad.pop_back();
  CHECK_THROWS_AS(decay_fit(qs, Jbad), std::invalid_argument);
  std::vector<RegionQuery> same(8, qs[0]);
  CHECK_THROWS_AS(decay_fit(same, J), std::invalid_argument);
}

TEST_CASE("certificate guard rails") {
  Trajectory z = zero_traj(41, 1e-3);
  ObservabilityEvaluator ev(z);
  ObservabilityConstants c;
  c.c0_sq = 1.0;
  c.A_sq = 1.0;
  c.L = 0.0;
  c.R0 = 1.0;
  c.M = 5.0;

  RegionQuery q;
  q.rho = 2.0;
  q.t = 1e-3;  // above t* = 2^-14
  CHECK_THROWS_AS(lower_bound_check(ev, q, c, 1e-3), std::invalid_argument);

  q.t = 1e-5;
  q.rho = 0.5;  // below R0
  CHECK_THROWS_AS(lower_bound_check(ev, q, c, 1e-3), std::invalid_argument);
  q.rho = 7.0;  // above M
  CHECK_THROWS_AS(lower_bound_check(ev, q, c, 1e-3), std::invalid_argument);

  // zero data: the check is reported as skipped, not failed
  ObservabilityConstants cz = c;
  cz.zero_data = true;
  q.rho = 2.0;
  LowerBoundResult r = lower_bound_check(ev, q, cz, 1e-3);
  CHECK(r.skipped);
  CHECK(r.pass);
}

TEST_CASE("uniqueness probes: zero data tends to zero in both modes") {
  Trajectory z = zero_traj(49, 1e-3);
  ObservabilityEvaluator ev(z);

  std::vector<RegionQuery> ts;
  for (double t : {0.016, 0.012, 0.008, 0.004}) {
    RegionQuery q;
    q.rho = 2.0;
    q.t = t;
    ts.push_back(q);
  }
  ProbeResult pt = uniqueness_probe(ev, 1.0, ProbeMode::TimeToZero, ts);
  CHECK(pt.verdict == ProbeVerdict::ToZero);
  CHECK(pt.log_values.size() == 4);

  std::vector<RegionQuery> rs;
  for (double rho : {2.0, 2.5, 3.0, 3.5}) {
    RegionQuery q;
    q.rho = rho;
    q.t = 0.012;
    rs.push_back(q);
  }
  ProbeResult pr = uniqueness_probe(ev, 1.0, ProbeMode::RadiusToInfinity, rs);
  CHECK(pr.verdict == ProbeVerdict::ToZero);

  // ordering is part of the contract
  std::vector<RegionQuery> up(ts.rbegin(), ts.rend());
  CHECK_THROWS_AS(uniqueness_probe(ev, 1.0, ProbeMode::TimeToZero, up),
                  std::invalid_argument);
  std::vector<RegionQuery> down(rs.rbegin(), rs.rend());
  CHECK_THROWS_AS(uniqueness_probe(ev, 1.0, ProbeMode::RadiusToInfinity, down),
                  std::invalid_argument);
  std::vector<RegionQuery> short_series(ts.begin(), ts.begin() + 3);
  CHECK_THROWS_AS(uniqueness_probe(ev, 1.0, ProbeMode::TimeToZero,
                                   short_series),
                  std::invalid_argument);
  // the time probe holds rho fixed
  std::vector<RegionQuery> mixed = ts;
  mixed[2].rho = 3.0;
  CHECK_THROWS_AS(uniqueness_probe(ev, 1.0, ProbeMode::TimeToZero, mixed),
                  std::invalid_argument);
}

TEST_CASE("annulus energy integrates the H^1 density over time") {
  Trajectory tr = short_free_gaussian();
  CHECK(annulus_energy(tr, 100.0, 200.0) == 0.0);
  // nearly all of the H^1 mass, (1 + 1/4) sqrt(2 pi) per slice; the open
  // inner radius drops the single origin cell (about 2 percent here)
  double full = annulus_energy(tr, 0.0, 1e9);
  CHECK(full == doctest::Approx(3.1332853 * 0.04).epsilon(5e-2));
  CHECK(full < 3.1333 * 0.04);
}
