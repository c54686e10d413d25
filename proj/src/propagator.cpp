#include "schrodlab/propagator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "schrodlab/fft.hpp"
#include "schrodlab/spectral.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {
namespace {

// phi1(z) = (e^z - 1)/z, the order-1 exponential integrator weight; series
// below |z| = 1/4 to avoid cancellation, remainder < 1e-18 at 13 terms.
cplx phi1(cplx z) {
  if (std::abs(z) < 0.25) {
    cplx acc{1, 0}, term{1, 0};
    for (int k = 1; k <= 12; ++k) {
      term *= z / static_cast<double>(k + 1);
      acc += term;
    }
    return acc;
  }
  return (std::exp(z) - 1.0) / z;
}

// Exact solution over delta of u' = i V u + i F with frozen coefficients.
void affine_substep(std::vector<cplx>& u, const std::vector<cplx>& V,
                    const std::vector<cplx>& F, bool have_forcing,
                    double delta) {
  const cplx idelta(0, delta);
  for (std::size_t j = 0; j < u.size(); ++j) {
    cplx z = idelta * V[j];
    cplx ez = std::exp(z);
    u[j] *= ez;
    if (have_forcing) u[j] += idelta * phi1(z) * F[j];
  }
}

std::vector<cplx> kinetic_multiplier(const Grid& g, double dt) {
  const std::vector<double> k = g.wavenumbers();
  std::vector<cplx> mult(g.size());
  if (g.dim == 1) {
    for (int j = 0; j < g.n; ++j) mult[j] = std::exp(cplx(0, -dt * k[j] * k[j]));
  } else {
    for (int jx = 0; jx < g.n; ++jx)
      for (int jy = 0; jy < g.n; ++jy)
        mult[g.flat(jx, jy)] =
            std::exp(cplx(0, -dt * (k[jx] * k[jx] + k[jy] * k[jy])));
  }
  return mult;
}

bool finite_values(const std::vector<cplx>& u) {
  for (const cplx& v : u)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

// Mass within 3 cells of the box edge as a fraction of the total.
double edge_mass_fraction(const Grid& g, const std::vector<cplx>& u) {
  std::vector<double> edge, all;
  all.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double m = std::norm(u[i]);
    all.push_back(m);
    int ix = g.dim == 1 ? static_cast<int>(i) : static_cast<int>(i) / g.n;
    int iy = g.dim == 1 ? 0 : static_cast<int>(i) % g.n;
    bool near = ix < 3 || ix >= g.n - 3;
    if (g.dim == 2) near = near || iy < 3 || iy >= g.n - 3;
    if (near) edge.push_back(m);
  }
  double total = pairwise_sum(all);
  if (total <= 0) return 0;
  return pairwise_sum(edge) / total;
}

void check_guards_pre(const WaveField& u0, const Potential& V, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("solver: dt must be positive");
  if (!field_finite(u0))
    throw std::invalid_argument("solver: initial state has non-finite entries");
  if (dt * V.sup_im > 0.1)
    throw std::invalid_argument(
        "solver: dt * sup|Im V| = " + std::to_string(dt * V.sup_im) +
        " exceeds 0.1; the complex gain per step is too large, reduce dt");
}

void check_state(const Grid& g, const std::vector<cplx>& u, double t) {
  if (!finite_values(u))
    throw std::runtime_error(
        "solver: non-finite state at t = " + std::to_string(t) +
        " (blow-up from complex gain or forcing)");
  double frac = edge_mass_fraction(g, u);
  if (frac > 1e-8) {
    char fb[32];
    std::snprintf(fb, sizeof fb, "%.3e", frac);
    throw std::runtime_error(
        "solver: mass fraction " + std::string(fb) +
        " within 3 cells of the box edge at t = " + std::to_string(t) +
        " exceeds 1e-8; enlarge half_width (periodic wrap-around would corrupt "
        "the run)");
  }
}

}  // namespace

WaveField step_strang(const WaveField& u, const Potential& V, const Forcing& F,
                      double t, double dt) {
  check_guards_pre(u, V, dt);
  WaveField out = u;
  const bool skip_affine = V.is_zero() && F.is_zero();
  std::vector<cplx> vslice, fslice;
  if (!skip_affine) {
    V.sample(u.grid, t + 0.25 * dt, vslice);
    F.sample(u.grid, t + 0.25 * dt, fslice);
    affine_substep(out.values, vslice, fslice, !F.is_zero(), 0.5 * dt);
  }
  apply_free_multiplier(out.grid, out.values, dt);
  if (!skip_affine) {
    V.sample(u.grid, t + 0.75 * dt, vslice);
    F.sample(u.grid, t + 0.75 * dt, fslice);
    affine_substep(out.values, vslice, fslice, !F.is_zero(), 0.5 * dt);
  }
  return out;
}

Trajectory solve(const WaveField& u0, const Potential& V, const Forcing& F,
                 double t_end, double dt, int store_stride) {
  check_guards_pre(u0, V, dt);
  if (!(t_end > 0)) throw std::invalid_argument("solve: t_end must be positive");
  if (store_stride < 1)
    throw std::invalid_argument("solve: store_stride must be >= 1");
  const double steps_real = t_end / dt;
  const long long steps = std::llround(steps_real);
  if (steps < 1 || std::abs(steps * dt - t_end) > 1e-9 * t_end)
    throw std::invalid_argument(
        "solve: dt does not divide t_end (steps*dt differs from t_end by more "
        "than 1e-9 relative)");
  if (steps % store_stride != 0)
    throw std::invalid_argument(
        "solve: store_stride must divide the step count so stored times stay "
        "uniform and include the final state");

  Trajectory traj;
  traj.grid = u0.grid;
  traj.t0 = 0;
  traj.dt = dt * store_stride;

  const bool skip_affine = V.is_zero() && F.is_zero();
  const std::vector<cplx> kin = kinetic_multiplier(u0.grid, dt);
  std::vector<cplx> u = u0.values;
  std::vector<cplx> hat(u.size());
  std::vector<cplx> vslice, fslice;

  check_state(u0.grid, u, 0.0);
  traj.slices.push_back(u);
  for (long long n = 0; n < steps; ++n) {
    const double t = dt * static_cast<double>(n);
    if (!skip_affine) {
      V.sample(u0.grid, t + 0.25 * dt, vslice);
      F.sample(u0.grid, t + 0.25 * dt, fslice);
      affine_substep(u, vslice, fslice, !F.is_zero(), 0.5 * dt);
    }
    fft_forward(u0.grid, u.data(), hat.data());
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= kin[j];
    fft_inverse(u0.grid, hat.data(), u.data());
    if (!skip_affine) {
      V.sample(u0.grid, t + 0.75 * dt, vslice);
      F.sample(u0.grid, t + 0.75 * dt, fslice);
      affine_substep(u, vslice, fslice, !F.is_zero(), 0.5 * dt);
    }
    if ((n + 1) % store_stride == 0) {
      check_state(u0.grid, u, dt * static_cast<double>(n + 1));
      traj.slices.push_back(u);
    }
  }
  return traj;
}

WaveField free_propagate(const WaveField& u, double t) {
  if (!field_finite(u))
    throw std::invalid_argument("free_propagate: non-finite input");
  WaveField out = u;
  if (t != 0) apply_free_multiplier(out.grid, out.values, t);
  return out;
}

Trajectory solve_nls(const WaveField& u0, const std::function<double(double)>& f,
                     double t_end, double dt, int store_stride) {
  if (!f) throw std::invalid_argument("solve_nls: missing nonlinearity");
  if (!(dt > 0)) throw std::invalid_argument("solve_nls: dt must be positive");
  if (!(t_end > 0))
    throw std::invalid_argument("solve_nls: t_end must be positive");
  if (!field_finite(u0))
    throw std::invalid_argument("solve_nls: initial state has non-finite entries");
  const long long steps = std::llround(t_end / dt);
  if (steps < 1 || std::abs(steps * dt - t_end) > 1e-9 * t_end)
    throw std::invalid_argument("solve_nls: dt does not divide t_end");
  if (store_stride < 1 || steps % store_stride != 0)
    throw std::invalid_argument("solve_nls: store_stride must divide the steps");

  Trajectory traj;
  traj.grid = u0.grid;
  traj.t0 = 0;
  traj.dt = dt * store_stride;
  const std::vector<cplx> kin = kinetic_multiplier(u0.grid, dt);
  std::vector<cplx> u = u0.values;
  std::vector<cplx> hat(u.size());

  auto half_phase = [&](std::vector<cplx>& state) {
    for (cplx& v : state) {
      double rho = std::norm(v);
      v *= std::exp(cplx(0, 0.5 * dt * f(rho)));
    }
  };

  check_state(u0.grid, u, 0.0);
  traj.slices.push_back(u);
  for (long long n = 0; n < steps; ++n) {
    half_phase(u);
    fft_forward(u0.grid, u.data(), hat.data());
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= kin[j];
    fft_inverse(u0.grid, hat.data(), u.data());
    half_phase(u);
    if ((n + 1) % store_stride == 0) {
      check_state(u0.grid, u, dt * static_cast<double>(n + 1));
      traj.slices.push_back(u);
    }
  }
  return traj;
}

NlsDifference nls_difference_potential(const Trajectory& u1,
                                       const Trajectory& u2,
                                       const std::function<double(double)>& f,
                                       double floor) {
  if (!u1.grid.same_as(u2.grid))
    throw std::invalid_argument(
        "nls_difference_potential: trajectories on different grids");
  if (u1.slices.size() != u2.slices.size() || u1.dt != u2.dt || u1.t0 != u2.t0)
    throw std::invalid_argument(
        "nls_difference_potential: trajectories on different time lattices");
  if (!(floor > 0))
    throw std::invalid_argument("nls_difference_potential: floor must be > 0");

  std::vector<std::vector<cplx>> slices(u1.slices.size());
  std::size_t floored = 0, total = 0;
  for (std::size_t k = 0; k < u1.slices.size(); ++k) {
    slices[k].resize(u1.slices[k].size());
    for (std::size_t j = 0; j < slices[k].size(); ++j) {
      cplx a = u1.slices[k][j], b = u2.slices[k][j];
      cplx w = a - b;
      ++total;
      if (std::abs(w) >= floor) {
        slices[k][j] = (f(std::norm(a)) * a - f(std::norm(b)) * b) / w;
      } else {
        slices[k][j] = cplx{0, 0};
        ++floored;
      }
    }
  }
  NlsDifference out;
  out.potential = sampled_potential(u1.grid, u1.t0, u1.dt, std::move(slices));
  out.floor_fraction =
      total == 0 ? 0.0 : static_cast<double>(floored) / static_cast<double>(total);
  return out;
}

double nls_difference_residual(const Trajectory& u1, const Trajectory& u2,
                               const NlsDifference& diff, double floor) {
  if (u1.slices.size() < 5)
    throw std::invalid_argument("nls_difference_residual: need >= 5 slices");
  const Grid& g = u1.grid;
  const double dt = u1.dt;
  std::vector<double> num, den;
  for (std::size_t k = 2; k + 2 < u1.slices.size(); ++k) {
    std::vector<cplx> w(g.size()), dwdt(g.size());
    auto wk = [&](std::size_t kk, std::size_t j) {
      return u1.slices[kk][j] - u2.slices[kk][j];
    };
    for (std::size_t j = 0; j < g.size(); ++j) {
      w[j] = wk(k, j);
      dwdt[j] = (-wk(k + 2, j) + 8.0 * wk(k + 1, j) - 8.0 * wk(k - 1, j) +
                 wk(k - 2, j)) /
                (12.0 * dt);
    }
    std::vector<cplx> lap = spectral_laplacian(g, w);
    const auto& V = diff.potential.slices[k];
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (std::abs(w[j]) < floor) continue;  // floor layer excluded
      cplx rhs = cplx(0, 1) * (lap[j] + V[j] * w[j]);
      num.push_back(std::norm(dwdt[j] - rhs));
      den.push_back(std::norm(rhs));
    }
  }
  double n2 = pairwise_sum(num), d2 = pairwise_sum(den);
  if (d2 <= 0) return 0;
  return std::sqrt(n2 / d2);
}

}  // namespace schrodlab
