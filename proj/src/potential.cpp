#include "schrodlab/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace schrodlab {

namespace {

cplx sample_linear_in_t(const Potential& p, std::size_t idx, double t) {
  const double last = p.t0 + p.dt * static_cast<double>(p.slices.size() - 1);
  double u = (t - p.t0) / p.dt;
  // clamp with a one-interval overhang allowance
  if (u < -1.0 - 1e-9 || u > static_cast<double>(p.slices.size()) + 1e-9)
    throw std::invalid_argument(
        "sampled potential queried at t outside its coverage (t = " +
        std::to_string(t) + ", range [" + std::to_string(p.t0) + ", " +
        std::to_string(last) + "])");
  if (u <= 0) return p.slices.front()[idx];
  if (u >= static_cast<double>(p.slices.size() - 1)) return p.slices.back()[idx];
  std::size_t k = static_cast<std::size_t>(u);
  double f = u - static_cast<double>(k);
  return (1.0 - f) * p.slices[k][idx] + f * p.slices[k + 1][idx];
}

}  // namespace

cplx Potential::eval(double x, double y, double t) const {
  switch (kind) {
    case Kind::Zero:
      return {0, 0};
    case Kind::Constant:
      return constant;
    case Kind::GaussianWell: {
      double r2 = x * x + y * y;
      double env = std::exp(-r2 / (2.0 * well_width * well_width));
      double mod = well_modulation == 0 ? 1.0 : std::cos(well_modulation * t);
      return well_amp * env * mod;
    }
    case Kind::Sampled: {
      // nearest grid point; sampled data is only evaluated on its own grid
      double h = grid.spacing();
      int ix = static_cast<int>(std::llround((x + grid.half_width) / h));
      int iy = grid.dim == 2
                   ? static_cast<int>(std::llround((y + grid.half_width) / h))
                   : 0;
      if (ix < 0 || ix >= grid.n || (grid.dim == 2 && (iy < 0 || iy >= grid.n)))
        throw std::invalid_argument("sampled potential queried outside its box");
      return sample_linear_in_t(*this, grid.flat(ix, iy), t);
    }
    case Kind::Callable:
      return fn(x, y, t);
  }
  return {0, 0};
}

void Potential::sample(const Grid& g, double t, std::vector<cplx>& out) const {
  out.resize(g.size());
  switch (kind) {
    case Kind::Zero:
      std::fill(out.begin(), out.end(), cplx{0, 0});
      return;
    case Kind::Constant:
      std::fill(out.begin(), out.end(), constant);
      return;
    case Kind::GaussianWell: {
      double mod = well_modulation == 0 ? 1.0 : std::cos(well_modulation * t);
      cplx amp = well_amp * mod;
      const double inv = 1.0 / (2.0 * well_width * well_width);
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto p = g.point(i);
        out[i] = amp * std::exp(-(p[0] * p[0] + p[1] * p[1]) * inv);
      }
      return;
    }
    case Kind::Sampled: {
      if (!grid.same_as(g))
        throw std::invalid_argument(
            "sampled potential used on a different grid than it was sampled on");
      for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = sample_linear_in_t(*this, i, t);
      return;
    }
    case Kind::Callable:
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto p = g.point(i);
        out[i] = fn(p[0], p[1], t);
      }
      return;
  }
}

Potential zero_potential() { return Potential{}; }

Potential constant_potential(cplx value) {
  Potential p;
  p.kind = Potential::Kind::Constant;
  p.constant = value;
  p.sup_bound = std::abs(value);
  p.sup_im = std::abs(value.imag());
  return p;
}

Potential gaussian_well(cplx amplitude, double width, double modulation) {
  if (!(width > 0))
    throw std::invalid_argument("gaussian_well: width must be positive");
  Potential p;
  p.kind = Potential::Kind::GaussianWell;
  p.well_amp = amplitude;
  p.well_width = width;
  p.well_modulation = modulation;
  p.sup_bound = std::abs(amplitude);
  p.sup_im = std::abs(amplitude.imag());
  return p;
}

Potential sampled_potential(const Grid& g, double t0, double dt,
                            std::vector<std::vector<cplx>> slices) {
  if (slices.empty() || !(dt > 0))
    throw std::invalid_argument("sampled_potential: need slices and dt > 0");
  for (const auto& s : slices)
    if (s.size() != g.size())
      throw std::invalid_argument("sampled_potential: slice size mismatch");
  Potential p;
  p.kind = Potential::Kind::Sampled;
  p.grid = g;
  p.t0 = t0;
  p.dt = dt;
  p.slices = std::move(slices);
  double sup = 0, sup_im = 0;
  for (const auto& s : p.slices)
    for (const cplx& v : s) {
      sup = std::max(sup, std::abs(v));
      sup_im = std::max(sup_im, std::abs(v.imag()));
    }
  p.sup_bound = sup;
  p.sup_im = sup_im;
  return p;
}

Potential callable_potential(std::function<cplx(double, double, double)> fn,
                             double sup_bound, double sup_im) {
  Potential p;
  p.kind = Potential::Kind::Callable;
  p.fn = std::move(fn);
  p.sup_bound = sup_bound;
  p.sup_im = sup_im;
  return p;
}

}  // namespace schrodlab
