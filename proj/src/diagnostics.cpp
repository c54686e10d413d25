#include "schrodlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "schrodlab/cutoffs.hpp"
#include "schrodlab/quadrature.hpp"
#include "schrodlab/scalars.hpp"
#include "schrodlab/spectral.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long slice_of(const Trajectory& u, double t) {
  if (u.dt <= 0) return (std::abs(t - u.t0) < 1e-12) ? 0 : -1;
  const double raw = (t - u.t0) / u.dt;
  const long k = std::lround(raw);
  if (k < 0 || static_cast<std::size_t>(k) >= u.slices.size()) return -1;
  if (std::abs(raw - static_cast<double>(k)) >
      1e-9 * std::max(1.0, std::abs(raw)))
    return -1;
  return k;
}

// Weights of the piecewise-linear-interpolant integral over [a, b] on the
// uniform lattice {k dt}: integrate exactly the linear interpolant, so the
// window endpoints need not land on slices.
std::vector<double> window_weights(double a, double b, double dt,
                                   std::size_t K) {
  if (!(b > a) || a < -1e-15)
    throw std::invalid_argument("bad integration window");
  if (b > (static_cast<double>(K) - 1) * dt * (1.0 + 1e-12))
    throw std::invalid_argument(
        "integration window [" + std::to_string(a) + ", " + std::to_string(b) +
        "] exceeds the stored time range");
  std::vector<double> w(K, 0.0);
  const double fa_raw = a / dt;
  const double fb_raw = std::min(b / dt, static_cast<double>(K) - 1);
  auto ja = static_cast<std::size_t>(std::max(0.0, std::floor(fa_raw)));
  auto jb = static_cast<std::size_t>(std::floor(fb_raw));
  if (jb >= K - 1) jb = K - 2;
  const double fa = fa_raw - static_cast<double>(ja);
  const double fb = fb_raw - static_cast<double>(jb);
  if (ja == jb) {
    w[ja] += dt * ((fb - fa) - 0.5 * (fb * fb - fa * fa));
    w[ja + 1] += dt * 0.5 * (fb * fb - fa * fa);
    return w;
  }
  w[ja] += dt * 0.5 * (1.0 - fa) * (1.0 - fa);
  w[ja + 1] += dt * 0.5 * (1.0 - fa * fa);
  for (std::size_t j = ja + 1; j < jb; ++j) {
    w[j] += dt * 0.5;
    w[j + 1] += dt * 0.5;
  }
  if (fb > 0) {
    w[jb] += dt * (fb - 0.5 * fb * fb);
    w[jb + 1] += dt * 0.5 * fb * fb;
  }
  return w;
}

std::vector<cplx> interp_slice(const Trajectory& u, double s) {
  const std::size_t K = u.slices.size();
  if (K < 4) throw std::invalid_argument("need at least 4 slices to "
                                         "interpolate in time");
  const double raw = (s - u.t0) / u.dt;
  if (raw < -1e-9 || raw > static_cast<double>(K - 1) * (1.0 + 1e-12) + 1e-9)
    throw std::invalid_argument("interpolation time outside stored range");
  const long near = std::lround(raw);
  if (std::abs(raw - static_cast<double>(near)) < 1e-10 && near >= 0 &&
      static_cast<std::size_t>(near) < K)
    return u.slices[static_cast<std::size_t>(near)];
  long base = static_cast<long>(std::floor(raw));
  base = std::clamp(base, 1L, static_cast<long>(K) - 3);
  const double f = raw - static_cast<double>(base);
  const double wm1 = -f * (f - 1.0) * (f - 2.0) / 6.0;
  const double w0 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  const double w1 = -(f + 1.0) * f * (f - 2.0) / 2.0;
  const double w2 = (f + 1.0) * f * (f - 1.0) / 6.0;
  const auto& sm1 = u.slices[static_cast<std::size_t>(base - 1)];
  const auto& s0 = u.slices[static_cast<std::size_t>(base)];
  const auto& s1 = u.slices[static_cast<std::size_t>(base + 1)];
  const auto& s2 = u.slices[static_cast<std::size_t>(base + 2)];
  std::vector<cplx> out(s0.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = wm1 * sm1[j] + w0 * s0[j] + w1 * s1[j] + w2 * s2[j];
  return out;
}

double logsumexp2(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

MassIdentityResult mass_identity_residual(
    const Trajectory& u, const Potential& V, double t,
    const std::function<double(double, double)>& weight,
    const std::function<std::array<double, 2>(double, double)>& weight_grad) {
  const long kt = slice_of(u, t);
  if (kt < 0)
    throw std::invalid_argument(
        "t must land on a stored slice of the trajectory");
  if (weight && !weight_grad)
    throw std::invalid_argument(
        "a non-trivial weight needs its gradient supplied alongside");
  const Grid& g = u.grid;
  const std::size_t M = g.size();

  std::vector<double> wvals(M, 1.0);
  std::vector<std::array<double, 2>> wgrad(M, {0.0, 0.0});
  bool weighted = static_cast<bool>(weight);
  if (weighted) {
    for (std::size_t j = 0; j < M; ++j) {
      const auto x = g.point(j);
      const double y = (g.dim > 1) ? x[1] : 0.0;
      wvals[j] = weight(x[0], y);
      wgrad[j] = weight_grad(x[0], y);
    }
  }

  auto weighted_mass = [&](const std::vector<cplx>& s) {
    std::vector<double> terms(M);
    for (std::size_t j = 0; j < M; ++j) terms[j] = wvals[j] * std::norm(s[j]);
    return pairwise_sum(terms.data(), terms.size()) * g.cell_volume();
  };

  const double mass0 = weighted_mass(u.slices.front());
  const double lhs = weighted_mass(u.slices[static_cast<std::size_t>(kt)]) -
                     mass0;

  // Trapezoid in time of the flux and potential terms.
  const std::size_t n = static_cast<std::size_t>(kt) + 1;
  std::vector<double> flux_terms(n, 0.0), pot_terms(n, 0.0);
  std::vector<cplx> vslice;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = u.time(k);
    const auto& us = u.slices[k];
    double flux_im = 0;
    if (weighted) {
      const auto grad = spectral_gradient(g, us);
      std::vector<double> terms(M);
      for (std::size_t j = 0; j < M; ++j) {
        cplx dot = wgrad[j][0] * grad[0][j];
        if (g.dim > 1) dot += wgrad[j][1] * grad[1][j];
        terms[j] = std::imag(std::conj(us[j]) * dot);
      }
      flux_im = pairwise_sum(terms.data(), terms.size()) * g.cell_volume();
    }
    double pot_im = 0;
    if (!V.is_zero()) {
      V.sample(g, s, vslice);
      std::vector<double> terms(M);
      for (std::size_t j = 0; j < M; ++j)
        terms[j] = wvals[j] * std::imag(vslice[j]) * std::norm(us[j]);
      pot_im = pairwise_sum(terms.data(), terms.size()) * g.cell_volume();
    }
    const double trap = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    flux_terms[k] = trap * flux_im;
    pot_terms[k] = trap * pot_im;
  }
  const double rhs =
      2.0 * u.dt * pairwise_sum(flux_terms.data(), flux_terms.size()) -
      2.0 * u.dt * pairwise_sum(pot_terms.data(), pot_terms.size());

  MassIdentityResult r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  const double base = std::abs(mass0);
  r.relative = r.residual / std::max(base, 1e-300);
  return r;
}

PointwiseMassResult mass_identity_pointwise(const Trajectory& u,
                                            const Potential& V, double t) {
  const long kt = slice_of(u, t);
  if (kt < 0)
    throw std::invalid_argument(
        "t must land on a stored slice of the trajectory");
  const Grid& g = u.grid;
  const std::size_t M = g.size();
  const std::size_t n = static_cast<std::size_t>(kt) + 1;

  // cum[j] = trapezoid over s of (div q + V |u|^2)(y_j, s), q = conj(u)grad u.
  std::vector<double> cum(M, 0.0), prev(M, 0.0), cur(M, 0.0);
  std::vector<cplx> vslice;
  std::vector<std::vector<cplx>> q(static_cast<std::size_t>(g.dim));
  for (std::size_t k = 0; k < n; ++k) {
    const auto& us = u.slices[k];
    const auto grad = spectral_gradient(g, us);
    for (int d = 0; d < g.dim; ++d) {
      auto& qd = q[static_cast<std::size_t>(d)];
      qd.resize(M);
      for (std::size_t j = 0; j < M; ++j)
        qd[j] = std::conj(us[j]) * grad[static_cast<std::size_t>(d)][j];
    }
    // spectral divergence of q
    std::vector<cplx> divq(M, cplx{0, 0});
    for (int d = 0; d < g.dim; ++d) {
      const auto dgrad = spectral_gradient(g, q[static_cast<std::size_t>(d)]);
      for (std::size_t j = 0; j < M; ++j)
        divq[j] += dgrad[static_cast<std::size_t>(d)][j];
    }
    const bool haveV = !V.is_zero();
    if (haveV) V.sample(g, u.time(k), vslice);
    for (std::size_t j = 0; j < M; ++j) {
      double val = std::imag(divq[j]);
      if (haveV) val += std::imag(vslice[j]) * std::norm(us[j]);
      cur[j] = val;
    }
    if (k > 0)
      for (std::size_t j = 0; j < M; ++j)
        cum[j] += 0.5 * u.dt * (prev[j] + cur[j]);
    std::swap(prev, cur);
  }

  const auto& ut = u.slices[static_cast<std::size_t>(kt)];
  const auto& u0 = u.slices.front();
  std::vector<double> res(M), sc(M);
  for (std::size_t j = 0; j < M; ++j) {
    res[j] = std::abs(std::norm(ut[j]) - std::norm(u0[j]) + 2.0 * cum[j]);
    sc[j] = std::norm(ut[j]);
  }
  PointwiseMassResult r;
  r.l1_residual = pairwise_sum(res.data(), res.size()) * g.cell_volume();
  r.scale = pairwise_sum(sc.data(), sc.size()) * g.cell_volume();
  r.relative = r.l1_residual / std::max(r.scale, 1e-300);
  return r;
}

ProofChainReport proof_chain_diagnostics(const Trajectory& u,
                                         const Potential& V, double gamma,
                                         double R0,
                                         const ObservabilityConstants& consts,
                                         int smoothness_order, double cn,
                                         double sigma_mult) {
  if (gamma <= 16.0) throw std::invalid_argument("gamma must exceed 16");
  if (R0 <= 0) throw std::invalid_argument("R0 must be positive");
  ProofChainReport rep;
  rep.gamma = gamma;
  rep.R0 = R0;
  rep.R = R0 * std::sqrt(gamma);
  rep.cn = cn;
  rep.sigma = sigma_mult * cn * rep.R * rep.R;

  if (consts.zero_data) {
    rep.skipped_zero_data = true;
    rep.admissible = true;
    rep.pass_B = rep.pass_B1 = rep.pass_B2 = true;
    rep.pass_floor = rep.pass_I1 = rep.pass_I2 = true;
    rep.cond2 = rep.cond3 = rep.cond4 = true;
    rep.all_pass = true;
    return rep;
  }

  const double A = std::sqrt(consts.A_sq);
  const double c0 = std::sqrt(consts.c0_sq);
  const double L = consts.L;
  double gmin = std::max(std::pow(A / c0, 4) * 16384.0, 1.0 / (R0 * R0));
  gmin = std::max(gmin, L * L);
  if (L > 0) gmin = std::max(gmin, c0 * L / (256.0 * A));
  rep.gamma_min = gmin;
  rep.admissible = gamma >= gmin;
  if (!rep.admissible)
    throw std::invalid_argument(
        "gamma = " + std::to_string(gamma) +
        " is below the admissible threshold " + std::to_string(gmin) +
        " for these constants");

  if (std::abs(u.t0) > 1e-12)
    throw std::invalid_argument("chain accounting needs a trajectory "
                                "starting at t = 0");
  const Interval s_in = s_interval_inner(gamma);
  const Interval s_out = s_interval_outer(gamma);
  if (u.t_end() < s_out.hi * (1.0 - 1e-12))
    throw std::invalid_argument(
        "trajectory must cover the outer window [" + std::to_string(s_out.lo) +
        ", " + std::to_string(s_out.hi) + "]; stored range ends at " +
        std::to_string(u.t_end()));

  const Grid& g = u.grid;
  const std::size_t M = g.size();
  const double h = g.spacing();
  const double cv = g.cell_volume();
  const double R = rep.R;

  const double band_hw = 4.0 * R0 / std::sqrt(gamma);
  if (2.0 * band_hw < 8.0 * h)
    throw std::invalid_argument(
        "transfer band of width 8*R0/sqrt(gamma) = " +
        std::to_string(2.0 * band_hw) +
        " spans fewer than 8 grid cells (spacing " + std::to_string(h) +
        "); refine the grid");

  const CutoffSet cut = build_cutoffs(R, smoothness_order);
  const std::size_t K = u.slices.size();
  const auto w_in = window_weights(s_in.lo, s_in.hi, u.dt, K);
  const auto w_out = window_weights(s_out.lo, s_out.hi, u.dt, K);
  std::size_t k_max = 0;
  for (std::size_t k = 0; k < K; ++k)
    if (w_in[k] != 0 || w_out[k] != 0) k_max = k;

  // Cell radii and radial unit vectors, fixed for the whole pass.
  std::vector<double> rad(M);
  std::vector<std::array<double, 2>> yhat(M, {0.0, 0.0});
  for (std::size_t j = 0; j < M; ++j) {
    const auto x = g.point(j);
    const double y1 = (g.dim > 1) ? x[1] : 0.0;
    const double r = std::hypot(x[0], y1);
    rad[j] = r;
    if (r > 0) yhat[j] = {x[0] / r, y1 / r};
  }

  const auto& u0 = u.slices.front();
  std::vector<double> abs2_0(M);
  for (std::size_t j = 0; j < M; ++j) abs2_0[j] = std::norm(u0[j]);

  // Ascending sweep: maintain the cumulative radial flux and potential-mass
  // integrals, and fold in the windowed s-integrals as slices arrive.
  std::vector<cplx> cum_rq(M, cplx{0, 0}), prev_rq(M), cur_rq(M);
  std::vector<cplx> cum_pot(M, cplx{0, 0}), prev_pot(M), cur_pot(M);
  std::vector<cplx> vslice;
  double B_signed = 0, X_flux = 0, Y_pot = 0, floor_acc = 0, band_acc = 0;
  double A_band_peak = 0;
  const bool haveV = !V.is_zero();

  std::vector<double> terms(M);
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double s = u.time(k);
    const auto& us = u.slices[k];
    const auto grad = spectral_gradient(g, us);
    for (std::size_t j = 0; j < M; ++j) {
      cplx rq = yhat[j][0] * grad[0][j];
      if (g.dim > 1) rq += yhat[j][1] * grad[1][j];
      cur_rq[j] = std::conj(us[j]) * rq;
    }
    if (haveV) {
      V.sample(g, s, vslice);
      for (std::size_t j = 0; j < M; ++j)
        cur_pot[j] = vslice[j] * std::norm(us[j]);
    } else {
      std::fill(cur_pot.begin(), cur_pot.end(), cplx{0, 0});
    }
    if (k > 0) {
      for (std::size_t j = 0; j < M; ++j) {
        cum_rq[j] += 0.5 * u.dt * (prev_rq[j] + cur_rq[j]);
        cum_pot[j] += 0.5 * u.dt * (prev_pot[j] + cur_pot[j]);
      }
    }
    std::swap(prev_rq, cur_rq);
    std::swap(prev_pot, cur_pot);

    if (w_in[k] != 0) {
      const double alpha = (1.0 + s * (gamma - 1.0)) / std::sqrt(gamma);
      // B term: theta^2-windowed mass change at time s.
      for (std::size_t j = 0; j < M; ++j) {
        const double th = cut.theta(rad[j] / alpha);
        terms[j] = th * th * (std::norm(us[j]) - abs2_0[j]);
      }
      B_signed += w_in[k] * pairwise_sum(terms.data(), terms.size()) * cv;
      // Flux part: (4/alpha) Im int theta theta' (yhat . cum_q).
      for (std::size_t j = 0; j < M; ++j) {
        const double a = rad[j] / alpha;
        const double td = cut.theta(a) * cut.theta_d(a);
        terms[j] = (td == 0) ? 0.0 : td * std::imag(cum_rq[j]);
      }
      X_flux += w_in[k] * (4.0 / alpha) *
                pairwise_sum(terms.data(), terms.size()) * cv;
      // Potential part: 2 Im int theta^2 cum_pot.
      for (std::size_t j = 0; j < M; ++j) {
        const double th = cut.theta(rad[j] / alpha);
        terms[j] = (th == 0) ? 0.0 : th * th * std::imag(cum_pot[j]);
      }
      Y_pot += w_in[k] * 2.0 * pairwise_sum(terms.data(), terms.size()) * cv;
      // Floor: initial mass inside the dilation-scaled plateau ball.
      for (std::size_t j = 0; j < M; ++j)
        terms[j] = (rad[j] <= alpha * R) ? abs2_0[j] : 0.0;
      floor_acc += w_in[k] * pairwise_sum(terms.data(), terms.size()) * cv;
    }

    if (w_out[k] != 0) {
      const double center = R0 * (1.0 + s * gamma);
      for (std::size_t j = 0; j < M; ++j) {
        if (std::abs(rad[j] - center) >= band_hw) {
          terms[j] = 0;
          continue;
        }
        double g2 = std::norm(grad[0][j]);
        if (g.dim > 1) g2 += std::norm(grad[1][j]);
        terms[j] = std::norm(us[j]) + g2 / gamma;
      }
      band_acc += w_out[k] * pairwise_sum(terms.data(), terms.size()) * cv;
      for (std::size_t j = 0; j < M; ++j) {
        if (rad[j] > 4.0 * R0) {
          terms[j] = 0;
          continue;
        }
        double g2 = std::norm(grad[0][j]);
        if (g.dim > 1) g2 += std::norm(grad[1][j]);
        terms[j] = std::norm(us[j]) + g2;
      }
      A_band_peak = std::max(
          A_band_peak, pairwise_sum(terms.data(), terms.size()) * cv);
    }
  }

  rep.B = std::abs(B_signed);
  rep.B1 = std::abs(X_flux);
  rep.B2 = std::abs(Y_pot);
  rep.B_scaled = gamma * rep.B;
  rep.B_bound = 16.0 * consts.A_sq / std::sqrt(gamma);
  rep.B1_bound = 8.0 * consts.A_sq / std::pow(gamma, 1.5);
  rep.A_band_sq = A_band_peak;
  rep.B1_bound_band = 8.0 * A_band_peak / std::pow(gamma, 1.5);
  rep.B2_bound = 8.0 * consts.A_sq * L / (gamma * gamma);
  rep.triangle_gap = rep.B - (rep.B1 + rep.B2);
  rep.floor_lhs = gamma * floor_acc;
  rep.floor_rhs = consts.c0_sq / 4.0;
  rep.band_integral = band_acc;

  rep.pass_B = rep.B_scaled <= rep.B_bound;
  rep.pass_B1 = rep.B1 <= rep.B1_bound;
  rep.pass_B2 = rep.B2 <= rep.B2_bound;
  rep.pass_floor = rep.floor_lhs >= rep.floor_rhs;

  // Window/gradient energies on the transformed side, evaluated through the
  // source trajectory: v(x,t) = alpha^{n/2} u(alpha x, s(t)) e^{-i beta|x|^2/4}
  // turns the |x| <= R+1 window into |y| <= alpha (R+1) and the gradient into
  // alpha grad u - (i/2) beta (y/alpha) u.
  const int nt = 257;
  const double t_lo = 0.25, t_hi = 0.75;
  const double dt_node = (t_hi - t_lo) / (nt - 1);
  double I11 = 0, I12 = 0, I2 = 0;
  for (int i = 0; i < nt; ++i) {
    const double t = t_lo + dt_node * i;
    const double s = s_of_t(gamma, t);
    const double alpha = alpha_of_t(gamma, t);
    const double beta = beta_of_t(gamma, t);
    const double r_win = alpha * (R + 1.0);
    if (r_win > g.half_width * (1.0 + 1e-12))
      throw std::invalid_argument(
          "window radius alpha*(R+1) = " + std::to_string(r_win) +
          " leaves the box; enlarge half_width");
    const auto uslice = interp_slice(u, s);
    const auto grad = spectral_gradient(g, uslice);
    std::vector<double> m_terms(M, 0.0), g_terms(M, 0.0), ann_terms(M, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
      if (rad[j] > r_win) continue;
      const auto x = g.point(j);
      const double a2 = std::norm(uslice[j]);
      double c2 = 0;
      for (int d = 0; d < g.dim; ++d) {
        const cplx comb =
            alpha * grad[static_cast<std::size_t>(d)][j] -
            cplx{0, 0.5 * beta} * (x[static_cast<std::size_t>(d)] / alpha) *
                uslice[j];
        c2 += std::norm(comb);
      }
      if (rad[j] <= r_win) {
        m_terms[j] = a2;
        g_terms[j] = c2;
      }
      if (rad[j] >= alpha * R) ann_terms[j] = a2 + c2;
    }
    const double trap = (i == 0 || i == nt - 1) ? 0.5 : 1.0;
    I11 += trap * dt_node * pairwise_sum(m_terms.data(), m_terms.size()) * cv;
    I12 += trap * dt_node * (4.0 / (R * R)) *
           pairwise_sum(g_terms.data(), g_terms.size()) * cv;
    I2 += trap * dt_node *
          pairwise_sum(ann_terms.data(), ann_terms.size()) * cv;
  }
  rep.I11 = I11;
  rep.I12 = I12;
  rep.I1 = I11 + I12;
  rep.I1_bound = 216.0 * consts.A_sq;
  rep.I2 = I2;
  rep.I2_bound = 32.0 * gamma * gamma * R0 * R0 * band_acc;
  rep.pass_I1 = rep.I1 <= rep.I1_bound;
  rep.pass_I2 = rep.I2 <= rep.I2_bound;

  // The three assembled-estimate conditions at sigma, in log scale.
  const double lhs_log =
      1.5 * std::log(rep.sigma) - std::log(cn * R * R);
  rep.cond2_lhs_log = lhs_log;
  rep.cond2_rhs_log = (L > 0) ? std::log(2.0 * L / gamma) : -kInf;
  rep.cond2 = lhs_log >= rep.cond2_rhs_log;
  rep.cond3_lhs_log = lhs_log;
  rep.cond3_rhs_log = std::log(512.0 * A / c0);
  rep.cond3 = lhs_log >= rep.cond3_rhs_log;
  rep.cond4_lhs_log = lhs_log + std::log(c0 / 16.0);
  const double tail_log =
      (band_acc > 0)
          ? std::log(6.0 * gamma * R0) + 36.0 * rep.sigma +
                0.5 * std::log(band_acc)
          : -kInf;
  rep.cond4_rhs_log = logsumexp2(std::log(16.0 * A), tail_log);
  rep.cond4 = rep.cond4_lhs_log <= rep.cond4_rhs_log;

  rep.all_pass = rep.pass_B && rep.pass_B1 && rep.pass_B2 && rep.pass_floor &&
                 rep.pass_I1 && rep.pass_I2 && rep.cond2 && rep.cond3 &&
                 rep.cond4 && rep.triangle_gap <= 1e-10;
  return rep;
}

}  // namespace schrodlab
