#include "schrodlab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "schrodlab/spectral.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {

namespace {

// Per-slice geometry of the moving weight: psi = x/R + phi(t) e1, w = |psi|^2.
struct WeightSlice {
  std::vector<double> w;
  std::vector<double> psi1;               // first component of psi
  std::vector<std::vector<double>> psis;  // all components, per axis
};

WeightSlice weight_slice(const Grid& g, const CutoffSet& cut, double t) {
  const std::size_t M = g.size();
  const double phi = cut.phi(t);
  WeightSlice ws;
  ws.w.resize(M);
  ws.psi1.resize(M);
  ws.psis.assign(static_cast<std::size_t>(g.dim), std::vector<double>(M));
  for (std::size_t j = 0; j < M; ++j) {
    const auto x = g.point(j);
    double w = 0;
    for (int d = 0; d < g.dim; ++d) {
      double pd = x[static_cast<std::size_t>(d)] / cut.R + (d == 0 ? phi : 0.0);
      ws.psis[static_cast<std::size_t>(d)][j] = pd;
      w += pd * pd;
    }
    ws.w[j] = w;
    ws.psi1[j] = ws.psis[0][j];
  }
  return ws;
}

double uniform01(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

SpaceTimeField apply_free_operator(const SpaceTimeField& f) {
  SpaceTimeField out = f;
  const SpaceTimeField dtf = time_derivative4(f);
  for (std::size_t k = 0; k < f.n_slices(); ++k) {
    const auto lap = spectral_laplacian(f.grid, f.slices[k]);
    auto& o = out.slices[k];
    for (std::size_t j = 0; j < o.size(); ++j)
      o[j] = cplx{0, 1} * dtf.slices[k][j] + lap[j];
  }
  return out;
}

// Space-time region carrying the honest content of the identities checked
// in this file: the spatial column of supp ref (union of per-slice
// supports) crossed with a window of +/- pad slices around those that hold
// data (the time stencil reaches that far).  For a smooth compactly
// supported field every operator image vanishes outside this set, and the
// comparisons restrict to it.  The spectral Laplacian of a cutoff with
// limited smoothness leaks an algebraic tail over the whole box; measured
// against the e^{-sigma w} damping, any cell outside the support gains an
// e^{sigma dw} weight advantage per cell over the support fringe, so even a
// two-cell spatial rim re-admits that noise at large sigma.  No spatial
// dilation, therefore: one cell outside the support both sides vanish with
// smooth contact and only leakage would be measured.
std::vector<std::vector<char>> support_neighborhood(const SpaceTimeField& ref,
                                                    int pad) {
  const std::size_t K = ref.n_slices();
  const std::size_t M = ref.grid.size();
  std::vector<char> col(M, 0);
  std::vector<char> live(K, 0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < M; ++j)
      if (std::norm(ref.slices[k][j]) > 0) {
        col[j] = 1;
        live[k] = 1;
      }
  const std::size_t p = static_cast<std::size_t>(pad);
  std::vector<char> window(K, 0);
  for (std::size_t k = 0; k < K; ++k) {
    if (!live[k]) continue;
    const std::size_t lo = k >= p ? k - p : 0;
    const std::size_t hi = std::min(K - 1, k + p);
    for (std::size_t kk = lo; kk <= hi; ++kk) window[kk] = 1;
  }
  std::vector<std::vector<char>> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    out[k].assign(M, 0);
    if (!window[k]) continue;
    for (std::size_t j = 0; j < M; ++j) out[k][j] = col[j];
  }
  return out;
}

void restrict_to(SpaceTimeField& f,
                 const std::vector<std::vector<char>>& mask) {
  for (std::size_t k = 0; k < f.n_slices(); ++k)
    for (std::size_t j = 0; j < f.slices[k].size(); ++j)
      if (!mask[k][j]) f.slices[k][j] = 0;
}

}  // namespace

SpaceTimeField build_g(const Trajectory& v, const CutoffSet& cutoffs) {
  if (v.slices.empty()) throw std::invalid_argument("empty trajectory");
  if (std::abs(v.t0) > 1e-12 || std::abs(v.t_end() - 1.0) > 1e-9)
    throw std::invalid_argument(
        "weighted-operator fields live on the unit time interval; got [" +
        std::to_string(v.t0) + ", " + std::to_string(v.t_end()) + "]");
  SpaceTimeField g;
  g.grid = v.grid;
  g.t0 = v.t0;
  g.dt = v.dt;
  g.slices.resize(v.slices.size());
  const std::size_t M = v.grid.size();
  for (std::size_t k = 0; k < v.slices.size(); ++k) {
    const WeightSlice ws = weight_slice(v.grid, cutoffs, g.time(k));
    auto& s = g.slices[k];
    s.resize(M);
    for (std::size_t j = 0; j < M; ++j) {
      const auto x = v.grid.point(j);
      double r = 0;
      for (double c : x) r += c * c;
      r = std::sqrt(r);
      s[j] = cutoffs.theta(r) * cutoffs.eta(std::sqrt(ws.w[j])) *
             v.slices[k][j];
    }
  }
  std::string why;
  if (!check_compact_support(g, 1e-12, &why))
    throw std::runtime_error(
        "masked field is not compactly supported in the box: " + why +
        " (enlarge half_width relative to R)");
  return g;
}

ConjugatedPair conjugate_operators(const SpaceTimeField& f,
                                   const CarlemanConfig& cfg) {
  const Grid& g = f.grid;
  const std::size_t M = g.size();
  const double R = cfg.cutoffs.R;
  const double sig = cfg.sigma;
  ConjugatedPair out;
  out.S_f = f;
  out.A_f = f;
  const SpaceTimeField dtf = time_derivative4(f);
  for (std::size_t k = 0; k < f.n_slices(); ++k) {
    const double t = f.time(k);
    const WeightSlice ws = weight_slice(g, cfg.cutoffs, t);
    const double phid = cfg.cutoffs.phi_d(t);
    const auto lap = spectral_laplacian(g, f.slices[k]);
    const auto grad = spectral_gradient(g, f.slices[k]);
    auto& S = out.S_f.slices[k];
    auto& A = out.A_f.slices[k];
    for (std::size_t j = 0; j < M; ++j) {
      const cplx u = f.slices[k][j];
      S[j] = cplx{0, 1} * dtf.slices[k][j] + lap[j] +
             (4.0 * sig * sig / (R * R)) * ws.w[j] * u;
      cplx adv{0, 0};
      for (int d = 0; d < g.dim; ++d)
        adv += ws.psis[static_cast<std::size_t>(d)][j] *
               grad[static_cast<std::size_t>(d)][j];
      A[j] = adv / R + (g.dim / (2.0 * R * R)) * u +
             cplx{0, phid / 2.0} * ws.psi1[j] * u;
    }
  }
  return out;
}

double conjugation_residual(const SpaceTimeField& f,
                            const CarlemanConfig& cfg) {
  std::string why;
  if (!check_compact_support(f, 1e-12, &why))
    throw std::invalid_argument(
        "conjugation identity needs a compactly supported field: " + why);
  const ConjugatedPair sa = conjugate_operators(f, cfg);
  const double sig = cfg.sigma;

  // p = e^{-sigma w} f, evaluated slice by slice (w moves with phi).
  SpaceTimeField p = f;
  SpaceTimeField rhs = f;
  for (std::size_t k = 0; k < f.n_slices(); ++k) {
    const WeightSlice ws = weight_slice(f.grid, cfg.cutoffs, f.time(k));
    for (std::size_t j = 0; j < f.slices[k].size(); ++j) {
      const double damp = std::exp(-sig * ws.w[j]);
      p.slices[k][j] = damp * f.slices[k][j];
      rhs.slices[k][j] =
          damp * (sa.S_f.slices[k][j] - 4.0 * sig * sa.A_f.slices[k][j]);
    }
  }
  SpaceTimeField lhs = apply_free_operator(p);
  const auto mask = support_neighborhood(f, 2);
  restrict_to(lhs, mask);
  restrict_to(rhs, mask);
  SpaceTimeField diff = lhs;
  for (std::size_t k = 0; k < diff.n_slices(); ++k)
    for (std::size_t j = 0; j < diff.slices[k].size(); ++j)
      diff.slices[k][j] -= rhs.slices[k][j];
  const double scale = st_norm(rhs);
  if (scale == 0) return st_norm(diff);
  return st_norm(diff) / scale;
}

CommutatorReport commutator_check(const SpaceTimeField& f,
                                  const CarlemanConfig& cfg) {
  const ConjugatedPair sa = conjugate_operators(f, cfg);
  const SpaceTimeField S_of_Af = conjugate_operators(sa.A_f, cfg).S_f;
  const SpaceTimeField A_of_Sf = conjugate_operators(sa.S_f, cfg).A_f;

  const Grid& g = f.grid;
  const std::size_t M = g.size();
  const double R = cfg.cutoffs.R;
  const double sig = cfg.sigma;

  SpaceTimeField comm = f, lapt = f, wt8 = f, wt4 = f, phit = f, dx1t = f;
  for (std::size_t k = 0; k < f.n_slices(); ++k) {
    const double t = f.time(k);
    const WeightSlice ws = weight_slice(g, cfg.cutoffs, t);
    const double phid = cfg.cutoffs.phi_d(t);
    const double phidd = cfg.cutoffs.phi_dd(t);
    const auto lap = spectral_laplacian(g, f.slices[k]);
    const auto grad = spectral_gradient(g, f.slices[k]);
    for (std::size_t j = 0; j < M; ++j) {
      const cplx u = f.slices[k][j];
      comm.slices[k][j] = S_of_Af.slices[k][j] - A_of_Sf.slices[k][j];
      lapt.slices[k][j] = (2.0 / (R * R)) * lap[j];
      wt8.slices[k][j] =
          (8.0 * sig * sig / (R * R * R * R)) * ws.w[j] * u;
      wt4.slices[k][j] =
          (4.0 * sig * sig / (R * R * R * R)) * ws.w[j] * u;
      phit.slices[k][j] =
          0.5 * (ws.psi1[j] * phidd + phid * phid) * u;
      dx1t.slices[k][j] = cplx{0, 2.0 * phid / R} * grad[0][j];
    }
  }

  CommutatorReport rep;
  rep.norm_commutator = st_norm(comm);
  rep.norm_lap_term = st_norm(lapt);
  rep.norm_w_term8 = st_norm(wt8);
  rep.norm_phi_term = st_norm(phit);
  rep.norm_dx1_term = st_norm(dx1t);

  auto residual_vs = [&](const SpaceTimeField& wt) {
    SpaceTimeField d = comm;
    for (std::size_t k = 0; k < d.n_slices(); ++k)
      for (std::size_t j = 0; j < d.slices[k].size(); ++j)
        d.slices[k][j] -= lapt.slices[k][j] - wt.slices[k][j] -
                          phit.slices[k][j] + dx1t.slices[k][j];
    const double scale = rep.norm_commutator;
    return scale == 0 ? st_norm(d) : st_norm(d) / scale;
  };
  rep.residual_coeff8 = residual_vs(wt8);
  rep.residual_coeff4 = residual_vs(wt4);
  return rep;
}

double weighted_norm_log(const SpaceTimeField& f, double sigma,
                         const CutoffSet& cutoffs) {
  const std::size_t K = f.n_slices();
  const std::size_t M = f.grid.size();
  double shift = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> sw(K);
  for (std::size_t k = 0; k < K; ++k) {
    const WeightSlice ws = weight_slice(f.grid, cutoffs, f.time(k));
    sw[k].resize(M);
    for (std::size_t j = 0; j < M; ++j) {
      sw[k][j] = sigma * ws.w[j];
      if (std::norm(f.slices[k][j]) > 0) shift = std::max(shift, sw[k][j]);
    }
  }
  if (!std::isfinite(shift)) return -std::numeric_limits<double>::infinity();
  std::vector<double> per_slice(K);
  std::vector<double> terms(M);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < M; ++j) {
      // zero cells contribute exactly zero; on them sw may exceed the
      // shift (taken over nonzero cells only) and the exp would overflow
      // to inf, turning the product into a NaN
      const double a = std::norm(f.slices[k][j]);
      terms[j] = a > 0 ? std::exp(2.0 * (sw[k][j] - shift)) * a : 0.0;
    }
    per_slice[k] = pairwise_sum(terms.data(), terms.size());
  }
  const double total = pairwise_sum(per_slice.data(), per_slice.size()) *
                       f.grid.cell_volume() * f.dt;
  return shift + 0.5 * std::log(total);
}

CarlemanCheck carleman_check(const SpaceTimeField& g,
                             const CarlemanConfig& cfg) {
  std::string why;
  if (!check_compact_support(g, 1e-12, &why))
    throw std::invalid_argument(
        "weighted lower bound needs a compactly supported field: " + why);
  bool any = false;
  for (std::size_t k = 0; k < g.n_slices(); ++k) {
    const WeightSlice ws = weight_slice(g.grid, cfg.cutoffs, g.time(k));
    for (std::size_t j = 0; j < g.slices[k].size(); ++j) {
      if (std::norm(g.slices[k][j]) == 0) continue;
      any = true;
      if (ws.w[j] < 1.0 - 1e-12)
        throw std::invalid_argument(
            "weighted lower bound requires |x/R + phi(t) e1| >= 1 on the "
            "support of the field");
    }
  }
  CarlemanCheck out;
  if (!any) {  // zero field: both sides vanish
    out.lhs_log = out.rhs_log = -std::numeric_limits<double>::infinity();
    out.lhs = out.rhs = 0;
    out.ratio = 1;
    out.pass = true;
    return out;
  }
  const double R = cfg.cutoffs.R;
  const double coeff_log =
      1.5 * std::log(cfg.sigma) - std::log(cfg.cn * R * R);
  out.lhs_log = coeff_log + weighted_norm_log(g, cfg.sigma, cfg.cutoffs);
  SpaceTimeField op = apply_free_operator(g);
  restrict_to(op, support_neighborhood(g, 2));
  out.rhs_log = weighted_norm_log(op, cfg.sigma, cfg.cutoffs);
  out.lhs = std::exp(out.lhs_log);
  out.rhs = std::exp(out.rhs_log);
  out.ratio = std::exp(out.rhs_log - out.lhs_log);
  out.pass = out.lhs_log <= out.rhs_log;
  return out;
}

std::vector<SpaceTimeField> carleman_test_suite(const Grid& g, int t_slices,
                                                const CutoffSet& cutoffs,
                                                int count, std::uint64_t seed,
                                                double env_lo, double env_hi,
                                                double env_ramp) {
  if (t_slices < 64) throw std::invalid_argument("need at least 64 slices");
  if (count < 1) throw std::invalid_argument("count must be positive");
  if (!(env_lo > 0) || !(env_hi < 1) || !(env_ramp > 0) ||
      env_hi - env_lo < 2.0 * env_ramp)
    throw std::invalid_argument("bad time envelope (need 0 < lo, hi < 1, "
                                "hi - lo >= 2 ramp)");
  const double R = cutoffs.R;
  // Bump centers live at |x1| in [2.25R, 3.5R] with spatial support radius
  // up to 3 * 0.4R; the box must hold that plus the three-cell zero margin.
  const double reach = 3.5 * R + 3.0 * 0.4 * R + 4.0 * g.spacing();
  if (g.half_width < reach)
    throw std::invalid_argument(
        "grid box too small for the test-field layout (need half_width >= " +
        std::to_string(reach) + ")");

  std::mt19937_64 rng(seed);
  const double dt = 1.0 / (t_slices - 1);
  const std::size_t M = g.size();
  std::vector<SpaceTimeField> suite;
  suite.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    const double rc = R * (2.25 + 1.25 * uniform01(rng));
    const double off = (g.dim > 1) ? R * (uniform01(rng) - 0.5) : 0.0;
    const double width = R * (0.2 + 0.2 * uniform01(rng));
    const double mom = -3.0 + 6.0 * uniform01(rng);
    const double amp = 0.5 + 1.5 * uniform01(rng);

    std::vector<cplx> prof(M);
    for (std::size_t j = 0; j < M; ++j) {
      const auto x = g.point(j);
      const double d1 = x[0] - sgn * rc;
      const double d2 = (g.dim > 1) ? x[1] - off : 0.0;
      const double r = std::hypot(d1, d2);
      const double win =
          1.0 - smoothstep(8, (r - 1.8 * width) / (1.2 * width));
      if (win <= 0) {
        prof[j] = 0;
        continue;
      }
      prof[j] = amp * std::exp(-r * r / (2.0 * width * width)) * win *
                std::exp(cplx{0, mom * d1});
    }

    SpaceTimeField f;
    f.grid = g;
    f.t0 = 0;
    f.dt = dt;
    f.slices.resize(static_cast<std::size_t>(t_slices));
    for (int k = 0; k < t_slices; ++k) {
      const double t = k * dt;
      const double env = smoothstep(8, (t - env_lo) / env_ramp) *
                         (1.0 - smoothstep(8, (t - (env_hi - env_ramp)) /
                                                  env_ramp));
      auto& s = f.slices[static_cast<std::size_t>(k)];
      s.assign(M, cplx{0, 0});
      if (env == 0) continue;
      const WeightSlice ws = weight_slice(g, cutoffs, t);
      for (std::size_t j = 0; j < M; ++j) {
        if (prof[j] == cplx{0, 0}) continue;
        const double mask = cutoffs.eta(std::sqrt(ws.w[j]));
        if (mask == 0) continue;
        s[j] = env * mask * prof[j];
      }
    }
    std::string why;
    if (!check_compact_support(f, 1e-12, &why))
      throw std::runtime_error("generated test field is not compactly "
                               "supported: " + why);
    suite.push_back(std::move(f));
  }
  return suite;
}

CalibrationResult calibrate_cn(const std::vector<SpaceTimeField>& suite,
                               const CutoffSet& cutoffs,
                               const std::vector<double>& sigma_multipliers) {
  if (suite.empty()) throw std::invalid_argument("empty test suite");
  if (sigma_multipliers.empty())
    throw std::invalid_argument("need at least one sigma multiplier");
  CalibrationResult out;
  for (int e = -12; e <= 12; ++e)
    out.scan_values.push_back(std::exp2(e / 2.0));

  // The free operator applied to each field does not depend on sigma or cn;
  // evaluate it once.
  std::vector<SpaceTimeField> ops;
  ops.reserve(suite.size());
  for (const auto& f : suite) {
    SpaceTimeField op = apply_free_operator(f);
    restrict_to(op, support_neighborhood(f, 2));
    ops.push_back(std::move(op));
  }

  // The large parameter is fixed per multiplier (sigma = mult * R^2, the
  // admissible family); only the constant under scan touches the left-hand
  // coefficient.  That makes the passing set upward closed in the scanned
  // value: a larger constant only weakens the claimed bound.
  const double R = cutoffs.R;
  out.pass_counts.assign(out.scan_values.size(), 0);
  std::vector<bool> all_pass(out.scan_values.size(), true);
  for (std::size_t ci = 0; ci < out.scan_values.size(); ++ci) {
    const double c = out.scan_values[ci];
    for (std::size_t fi = 0; fi < suite.size(); ++fi) {
      for (double mult : sigma_multipliers) {
        const double sigma = mult * R * R;
        const double coeff_log =
            1.5 * std::log(sigma) - std::log(c * R * R);
        const double lhs_log =
            coeff_log + weighted_norm_log(suite[fi], sigma, cutoffs);
        const double rhs_log = weighted_norm_log(ops[fi], sigma, cutoffs);
        if (lhs_log <= rhs_log)
          ++out.pass_counts[ci];
        else
          all_pass[ci] = false;
      }
    }
  }

  // Smallest scan value whose upward closure is all-pass.
  std::size_t idx = out.scan_values.size();
  for (std::size_t ci = out.scan_values.size(); ci-- > 0;) {
    if (!all_pass[ci]) break;
    idx = ci;
  }
  if (idx < out.scan_values.size()) {
    out.found = true;
    out.cn = out.scan_values[idx];
    out.lower_edge = (idx == 0);
  }
  return out;
}

}  // namespace schrodlab
