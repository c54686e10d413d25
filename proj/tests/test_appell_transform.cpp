#include <doctest.h>

#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <schrodlab/appell.hpp>
#include <schrodlab/field.hpp>
#include <schrodlab/grid.hpp>
#include <schrodlab/potential.hpp>
#include <schrodlab/propagator.hpp>
#include <schrodlab/scalars.hpp>

using namespace schrodlab;

namespace {

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double w = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

// closed-form free evolution of exp(-x^2/4) sampled as a trajectory
Trajectory free_gaussian_traj(const Grid& g, double s_end, double ds) {
  Trajectory tr;
  tr.grid = g;
  tr.t0 = 0;
  tr.dt = ds;
  int n = static_cast<int>(std::llround(s_end / ds)) + 1;
  tr.slices.resize(n);
  for (int k = 0; k < n; ++k) {
    cplx z(1.0, ds * k);
    cplx pref = 1.0 / std::sqrt(z);
    tr.slices[k].resize(g.size());
    for (int i = 0; i < g.n; ++i) {
      double x = g.coord(i);
      tr.slices[k][i] = pref * std::exp(-x * x / (4.0 * z));
    }
  }
  return tr;
}

}  // namespace

TEST_CASE("weights: normalized family and inverse") {
  AppellWeights w = normalized_weights(2.25);
  CHECK(w.a == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(w.b == doctest::Approx(1.0 / 1.5).epsilon(1e-15));
  AppellWeights inv = inverse_weights(w);
  CHECK(inv.a == w.b);
  CHECK(inv.b == w.a);
  CHECK_THROWS_AS(normalized_weights(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normalized_weights(-2.0), std::invalid_argument);
}

TEST_CASE("gamma = 1 transform is the identity on stored slices") {
  Grid g = make_grid(1, 12.0, 128);
  WaveField u0 = gaussian_packet(g, 1.0, {0.5, 0}, 1.2, {0.3, 0});
  Trajectory tr = solve(u0, gaussian_well(cplx(0.3, 0), 2.0, 0.0),
                        zero_potential(), 0.2, 2e-3, 5);
  Trajectory out = appell_transform(tr, 1.0, g, 0.05, 0.01, 11);
  CHECK(out.slices.size() == 11);
  for (int k = 0; k < 11; ++k) {
    std::size_t src = 5 + static_cast<std::size_t>(k);
    CHECK(sup_diff(out.slices[k], tr.slices[src]) < 1e-12);
  }
}

TEST_CASE("transformed free Gaussian matches its closed form") {
  Grid gs = make_grid(1, 24.0, 384);
  Trajectory src = free_gaussian_traj(gs, 0.65, 2.5e-3);

  const double gamma = 2.25;
  TransformSpec spec;
  spec.weights = normalized_weights(gamma);
  spec.out_grid = make_grid(1, 18.0, 288);
  spec.out_t0 = 0.1;
  spec.out_dt = 0.01;
  spec.out_slices = 41;
  Trajectory v = appell_transform(src, spec);

  const double a = spec.weights.a, b = spec.weights.b;
  double worst = 0;
  for (int k = 0; k < spec.out_slices; ++k) {
    double t = spec.out_t0 + spec.out_dt * k;
    double D = a * (1.0 - t) + b * t;
    double m = std::sqrt(a * b) / D;
    double s = b * t / D;
    cplx z(1.0, s);
    cplx pref = std::sqrt(m) / std::sqrt(z);
    for (int i = 0; i < spec.out_grid.n; ++i) {
      double x = spec.out_grid.coord(i);
      cplx expect = pref * std::exp(-(m * x) * (m * x) / (4.0 * z)) *
                    std::exp(cplx(0, -(a - b) * x * x / (4.0 * D)));
      worst = std::max(worst, std::abs(v.slices[k][i] - expect));
    }
    // the map is an isometry slice by slice: mass sqrt(2 pi) throughout
    CHECK(field_mass(v.field(k)) ==
          doctest::Approx(2.5066282746310002).epsilon(1e-9));
  }
  CHECK(worst < 1e-8);

  // consistency with the scalar family: m(t) = alpha(t), phase = beta(t)/4
  for (double t : {0.1, 0.37, 0.5}) {
    double D = a * (1.0 - t) + b * t;
    CHECK(std::sqrt(a * b) / D ==
          doctest::Approx(alpha_of_t(gamma, t)).epsilon(1e-13));
    CHECK((a - b) / D == doctest::Approx(beta_of_t(gamma, t)).epsilon(1e-13));
    CHECK(b * t / D == doctest::Approx(s_of_t(gamma, t)).epsilon(1e-13));
  }
}

TEST_CASE("forward then inverse transform returns the source window") {
  Grid g = make_grid(1, 8.0, 128);
  WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 0.8, {0.4, 0});
  Trajectory src = solve(u0, gaussian_well(cplx(0.25, 0), 1.5, 2.0),
                         zero_potential(), 0.5, 2.5e-4, 4);

  TransformSpec fwd;
  fwd.weights = normalized_weights(2.25);
  fwd.out_grid = g;
  fwd.out_t0 = 0.34;
  fwd.out_dt = 2e-3;
  fwd.out_slices = 91;
  Trajectory v = appell_transform(src, fwd);

  TransformSpec inv;
  inv.weights = inverse_weights(fwd.weights);
  inv.out_grid = make_grid(1, 6.0, 96);
  inv.out_t0 = 0.2;
  inv.out_dt = 2e-3;
  inv.out_slices = 51;
  Trajectory w = appell_transform(v, inv);

  double worst = 0;
  for (int k = 0; k < inv.out_slices; ++k) {
    std::size_t src_k = 200 + 2 * static_cast<std::size_t>(k);
    for (int j = 0; j < inv.out_grid.n; ++j)
      worst = std::max(worst,
                       std::abs(w.slices[k][j] - src.slices[src_k][j + 16]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("transformed constant potential is alpha(t)^2 times the constant") {
  const cplx c(0.3, -0.2);
  TransformSpec spec;
  spec.weights = normalized_weights(4.0);
  spec.out_grid = make_grid(1, 4.0, 64);
  spec.out_t0 = 0.2;
  spec.out_dt = 0.05;
  spec.out_slices = 13;
  Potential vt = transform_potential(constant_potential(c), spec);
  CHECK(vt.kind == Potential::Kind::Sampled);
  CHECK(vt.t0 == doctest::Approx(0.2));
  CHECK(vt.dt == doctest::Approx(0.05));
  double worst = 0;
  for (int k = 0; k < spec.out_slices; ++k) {
    double t = spec.out_t0 + spec.out_dt * k;
    double a2 = alpha_of_t(4.0, t);
    a2 *= a2;
    for (const cplx& z : vt.slices[k])
      worst = std::max(worst, std::abs(z - a2 * c));
  }
  CHECK(worst < 1e-12);
  double amax = alpha_of_t(4.0, 0.8);
  CHECK(vt.sup_bound ==
        doctest::Approx(std::abs(c) * amax * amax).epsilon(1e-12));
}

TEST_CASE("equal weights leave a forcing term unchanged") {
  Forcing F = gaussian_well(cplx(0.4, 0.1), 1.5, 2.0);
  TransformSpec spec;
  spec.weights = AppellWeights{1.3, 1.3};
  spec.out_grid = make_grid(1, 6.0, 64);
  spec.out_t0 = 0.1;
  spec.out_dt = 0.1;
  spec.out_slices = 6;
  Forcing Ft = transform_forcing(F, spec);
  double worst = 0;
  for (int k = 0; k < spec.out_slices; ++k) {
    double t = spec.out_t0 + spec.out_dt * k;
    for (int i = 0; i < spec.out_grid.n; ++i)
      worst = std::max(worst, std::abs(Ft.slices[k][i] -
                                       F.eval(spec.out_grid.coord(i), 0, t)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("transform validation: dilation, coverage, inputs") {
  Grid g = make_grid(1, 8.0, 128);
  WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 0.8, {0, 0});
  Trajectory src = solve(u0, zero_potential(), zero_potential(), 0.5, 2.5e-3);

  // the dilated sample points leave the source box near t = 0.7
  CHECK_THROWS_AS(appell_transform(src, 2.25, g, 0.6, 0.01, 11),
                  std::invalid_argument);
  // source time coverage runs out
  CHECK_THROWS_AS(appell_transform(src, 2.25, make_grid(1, 4.0, 64), 0.9,
                                   0.01, 11),
                  std::invalid_argument);
  CHECK_THROWS_AS(appell_transform(src, -1.0, g, 0.1, 0.01, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(appell_transform(src, 1.0, g, 0.1, -0.01, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(appell_transform(src, 1.0, g, 0.1, 0.01, 0),
                  std::invalid_argument);

  Trajectory tiny = src;
  tiny.slices.resize(3);
  CHECK_THROWS_AS(appell_transform(tiny, 1.0, g, 0.0, 1e-3, 2),
                  std::invalid_argument);

  // sampled potentials cannot be re-transformed (no closed form to read)
  TransformSpec spec;
  spec.weights = normalized_weights(2.0);
  spec.out_grid = make_grid(1, 4.0, 64);
  spec.out_t0 = 0.2;
  spec.out_dt = 0.1;
  spec.out_slices = 3;
  std::vector<std::vector<cplx>> sl(2, std::vector<cplx>(g.size(), cplx(1, 0)));
  Potential sampled = sampled_potential(g, 0.0, 1.0, sl);
  CHECK_THROWS_AS(transform_potential(sampled, spec), std::invalid_argument);
}

TEST_CASE("transformed triples still solve the equation, at solver order") {
  Grid g = make_grid(1, 16.0, 256);
  WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});
  Potential V = gaussian_well(cplx(0.3, 0.2), 2.0, 1.5);

  auto closure_residual = [&](double dt, double out_dt, int out_slices) {
    Trajectory src = solve(u0, V, zero_potential(), 0.5, dt);
    TransformSpec spec;
    spec.weights = normalized_weights(2.25);
    spec.out_grid = g;
    spec.out_t0 = 0.04;
    spec.out_dt = out_dt;
    spec.out_slices = out_slices;
    Trajectory vtr = appell_transform(src, spec);
    Potential Vt = transform_potential(V, spec);
    Forcing Ft = transform_forcing(zero_potential(), spec);
    return schrodinger_residual(vtr, Vt, Ft).relative;
  };

  double coarse = closure_residual(2e-3, 4e-3, 116);
  double fine = closure_residual(1e-3, 2e-3, 231);
  CHECK(fine < 1e-4);
  CHECK(coarse / fine > 2.5);
  CHECK(coarse / fine < 6.0);
}
