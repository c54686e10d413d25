#include "schrodlab/appell.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "schrodlab/fft.hpp"
#include "schrodlab/spectral.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {

AppellWeights normalized_weights(double gamma) {
  if (!(gamma > 0))
    throw std::invalid_argument("normalized_weights: gamma must be positive");
  const double rg = std::sqrt(gamma);
  return AppellWeights{rg, 1.0 / rg};
}

AppellWeights inverse_weights(const AppellWeights& w) {
  return AppellWeights{w.b, w.a};
}

namespace {

// Band-limited (trigonometric) point evaluation of one 1d slice from its DFT.
// theta is the spectral angle 2*pi*(xi + hw)/(n h) = pi*(xi + hw)/hw; modes
// are paired (j, n-j) so the running phasor serves both signs, with periodic
// resync to stop rounding drift.
cplx eval_modes_1d(const std::vector<cplx>& hat, int n, double theta) {
  cplx acc = hat[0];
  cplx step = std::polar(1.0, theta);
  cplx pos{1, 0};
  for (int j = 1; j < n / 2; ++j) {
    pos = (j % 64 == 0) ? std::polar(1.0, theta * j) : pos * step;
    acc += hat[j] * pos + hat[n - j] * std::conj(pos);
  }
  acc += hat[n / 2] * std::cos(0.5 * n * theta);
  return acc / static_cast<double>(n);
}

double spectral_angle(const Grid& src, double xi) {
  return kPi * (xi + src.half_width) / src.half_width;
}

// Evaluate one source slice at scale*x for every point x of the output grid.
std::vector<cplx> dilated_sample(const Grid& src, const std::vector<cplx>& slice,
                                 const Grid& out, double scale) {
  std::vector<cplx> result(out.size());
  if (src.dim == 1) {
    std::vector<cplx> hat = fft_forward(src, slice);
    for (int p = 0; p < out.n; ++p)
      result[p] = eval_modes_1d(hat, src.n, spectral_angle(src, scale * out.coord(p)));
    return result;
  }
  // 2d tensor pass: rows over the y-axis first, then the x-axis.
  std::vector<cplx> hat = fft_forward(src, slice);
  const int n = src.n;
  // Each eval_modes_1d pass divides by n once, giving the 1/n^2 overall.
  std::vector<cplx> partial(static_cast<std::size_t>(n) * out.n);
  std::vector<cplx> row(n);
  for (int jx = 0; jx < n; ++jx) {
    for (int jy = 0; jy < n; ++jy) row[jy] = hat[src.flat(jx, jy)];
    for (int q = 0; q < out.n; ++q)
      partial[static_cast<std::size_t>(jx) * out.n + q] =
          eval_modes_1d(row, n, spectral_angle(src, scale * out.coord(q)));
  }
  std::vector<cplx> col(n);
  for (int q = 0; q < out.n; ++q) {
    for (int jx = 0; jx < n; ++jx)
      col[jx] = partial[static_cast<std::size_t>(jx) * out.n + q];
    for (int p = 0; p < out.n; ++p)
      result[out.flat(p, q)] =
          eval_modes_1d(col, n, spectral_angle(src, scale * out.coord(p)));
  }
  return result;
}

// 4-point cubic interpolation across uniformly spaced slices. Exact stored
// times are snapped (weights (0,1,0,0)), so lattice-aligned queries copy.
std::vector<cplx> time_interp(const Trajectory& u, double tau) {
  const std::size_t K = u.slices.size();
  const double r = (tau - u.t0) / u.dt;
  const double snapped = std::round(r);
  if (std::abs(r - snapped) < 1e-10 && snapped >= 0 &&
      snapped <= static_cast<double>(K - 1))
    return u.slices[static_cast<std::size_t>(snapped)];
  if (r < 1.0 || r > static_cast<double>(K - 2))
    throw std::invalid_argument(
        "appell_transform: requested output time needs source time " +
        std::to_string(tau) +
        " which is outside the interpolable range of the input trajectory "
        "(one-slice margin at each end); extend the source run");
  const std::size_t k0 = static_cast<std::size_t>(r);
  const double f = r - static_cast<double>(k0);
  const double wm1 = -f * (f - 1.0) * (f - 2.0) / 6.0;
  const double w0 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  const double w1 = -(f + 1.0) * f * (f - 2.0) / 2.0;
  const double w2 = (f + 1.0) * f * (f - 1.0) / 6.0;
  const auto& a = u.slices[k0 - 1];
  const auto& b = u.slices[k0];
  const auto& c = u.slices[k0 + 1];
  const auto& d = u.slices[k0 + 2];
  std::vector<cplx> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    out[j] = wm1 * a[j] + w0 * b[j] + w1 * c[j] + w2 * d[j];
  return out;
}

struct SliceMap {
  double D, m, s;
};

SliceMap slice_map(const AppellWeights& w, double t) {
  const double D = w.a * (1.0 - t) + w.b * t;
  if (!(D > 0))
    throw std::invalid_argument(
        "appell_transform: degenerate time map (a(1-t)+bt <= 0 at t = " +
        std::to_string(t) + ")");
  return SliceMap{D, std::sqrt(w.a * w.b) / D, w.b * t / D};
}

void check_spec(const TransformSpec& spec) {
  if (!(spec.weights.a > 0) || !(spec.weights.b > 0))
    throw std::invalid_argument("appell_transform: weights must be positive");
  if (spec.out_slices < 1)
    throw std::invalid_argument("appell_transform: need at least one output slice");
  if (spec.out_slices > 1 && !(spec.out_dt > 0))
    throw std::invalid_argument("appell_transform: out_dt must be positive");
}

void check_dilation_fits(const Grid& src, const Grid& out, double m, double t) {
  if (m * out.half_width > src.half_width * (1.0 + 1e-9))
    throw std::invalid_argument(
        "appell_transform: dilated sample points exit the source box at t = " +
        std::to_string(t) + " (scale " + std::to_string(m) +
        "); shrink the output box or stop earlier in t");
}

}  // namespace

Trajectory appell_transform(const Trajectory& u, const TransformSpec& spec) {
  check_spec(spec);
  if (u.grid.dim != spec.out_grid.dim)
    throw std::invalid_argument("appell_transform: dimension mismatch");
  if (u.slices.size() < 2)
    throw std::invalid_argument("appell_transform: source trajectory too short");

  Trajectory out;
  out.grid = spec.out_grid;
  out.t0 = spec.out_t0;
  out.dt = spec.out_dt;
  out.slices.reserve(spec.out_slices);

  const double n_half = 0.5 * u.grid.dim;
  for (int j = 0; j < spec.out_slices; ++j) {
    const double t = spec.out_t0 + spec.out_dt * j;
    const SliceMap sm = slice_map(spec.weights, t);
    check_dilation_fits(u.grid, spec.out_grid, sm.m, t);
    std::vector<cplx> src_slice = time_interp(u, sm.s);
    std::vector<cplx> vals =
        dilated_sample(u.grid, src_slice, spec.out_grid, sm.m);
    const double amp = std::pow(sm.m, n_half);
    const double phase_coef = -(spec.weights.a - spec.weights.b) / (4.0 * sm.D);
    for (std::size_t p = 0; p < vals.size(); ++p) {
      auto xy = spec.out_grid.point(p);
      double r2 = xy[0] * xy[0] + xy[1] * xy[1];
      vals[p] *= amp * std::exp(cplx(0, phase_coef * r2));
    }
    out.slices.push_back(std::move(vals));
  }
  return out;
}

Trajectory appell_transform(const Trajectory& u, double gamma,
                            const Grid& out_grid, double out_t0, double out_dt,
                            int out_slices) {
  TransformSpec spec;
  spec.weights = normalized_weights(gamma);
  spec.out_grid = out_grid;
  spec.out_t0 = out_t0;
  spec.out_dt = out_dt;
  spec.out_slices = out_slices;
  return appell_transform(u, spec);
}

Potential transform_potential(const Potential& V, const TransformSpec& spec) {
  check_spec(spec);
  if (V.kind == Potential::Kind::Sampled)
    throw std::invalid_argument(
        "transform_potential: sampled input not supported (needs off-grid "
        "reads); use a closed form or callable");
  if (V.is_zero()) return zero_potential();
  std::vector<std::vector<cplx>> slices(spec.out_slices);
  for (int j = 0; j < spec.out_slices; ++j) {
    const double t = spec.out_t0 + spec.out_dt * j;
    const SliceMap sm = slice_map(spec.weights, t);
    const double coef = spec.weights.a * spec.weights.b / (sm.D * sm.D);
    slices[j].resize(spec.out_grid.size());
    for (std::size_t p = 0; p < spec.out_grid.size(); ++p) {
      auto xy = spec.out_grid.point(p);
      slices[j][p] = coef * V.eval(sm.m * xy[0], sm.m * xy[1], sm.s);
    }
  }
  return sampled_potential(spec.out_grid, spec.out_t0,
                           spec.out_slices > 1 ? spec.out_dt : 1.0,
                           std::move(slices));
}

Forcing transform_forcing(const Forcing& F, const TransformSpec& spec) {
  check_spec(spec);
  if (F.kind == Potential::Kind::Sampled)
    throw std::invalid_argument(
        "transform_forcing: sampled input not supported (needs off-grid "
        "reads); use a closed form or callable");
  if (F.is_zero()) return zero_potential();
  const double n_half = 0.5 * spec.out_grid.dim;
  std::vector<std::vector<cplx>> slices(spec.out_slices);
  for (int j = 0; j < spec.out_slices; ++j) {
    const double t = spec.out_t0 + spec.out_dt * j;
    const SliceMap sm = slice_map(spec.weights, t);
    const double amp = std::pow(sm.m, n_half + 2.0);
    const double phase_coef = -(spec.weights.a - spec.weights.b) / (4.0 * sm.D);
    slices[j].resize(spec.out_grid.size());
    for (std::size_t p = 0; p < spec.out_grid.size(); ++p) {
      auto xy = spec.out_grid.point(p);
      double r2 = xy[0] * xy[0] + xy[1] * xy[1];
      slices[j][p] = amp * F.eval(sm.m * xy[0], sm.m * xy[1], sm.s) *
                     std::exp(cplx(0, phase_coef * r2));
    }
  }
  return sampled_potential(spec.out_grid, spec.out_t0,
                           spec.out_slices > 1 ? spec.out_dt : 1.0,
                           std::move(slices));
}

ResidualReport schrodinger_residual(const Trajectory& u, const Potential& V,
                                    const Forcing& F) {
  if (u.slices.size() < 5)
    throw std::invalid_argument("schrodinger_residual: need >= 5 slices");
  const Grid& g = u.grid;
  const double dt = u.dt;
  const double wt = g.cell_volume() * dt;
  std::vector<double> num, den;
  std::vector<cplx> vslice, fslice;
  for (std::size_t k = 2; k + 2 < u.slices.size(); ++k) {
    const auto& um2 = u.slices[k - 2];
    const auto& um1 = u.slices[k - 1];
    const auto& u0 = u.slices[k];
    const auto& up1 = u.slices[k + 1];
    const auto& up2 = u.slices[k + 2];
    std::vector<cplx> lap = spectral_laplacian(g, u0);
    V.sample(g, u.time(k), vslice);
    F.sample(g, u.time(k), fslice);
    for (std::size_t j = 0; j < u0.size(); ++j) {
      cplx dudt =
          (-up2[j] + 8.0 * up1[j] - 8.0 * um1[j] + um2[j]) / (12.0 * dt);
      cplx rhs = cplx(0, 1) * (lap[j] + vslice[j] * u0[j] + fslice[j]);
      num.push_back(std::norm(dudt - rhs));
      den.push_back(std::norm(rhs));
    }
  }
  ResidualReport rep;
  rep.absolute = std::sqrt(wt * pairwise_sum(num));
  rep.reference = std::sqrt(wt * pairwise_sum(den));
  rep.relative = rep.reference > 0 ? rep.absolute / rep.reference : 0.0;
  return rep;
}

}  // namespace schrodlab
