#include "schrodlab/observability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "schrodlab/quadrature.hpp"
#include "schrodlab/spectral.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The stored-slice index of time t, or -1 if t is off the lattice.
long slice_index(const Trajectory& u, double t) {
  if (u.dt <= 0) return (std::abs(t - u.t0) < 1e-12) ? 0 : -1;
  const double raw = (t - u.t0) / u.dt;
  const long k = std::lround(raw);
  if (k < 0 || static_cast<std::size_t>(k) >= u.slices.size()) return -1;
  if (std::abs(raw - static_cast<double>(k)) >
      1e-9 * std::max(1.0, std::abs(raw)))
    return -1;
  return k;
}

double wrap_to_pi(double x) {
  // reduce to (-pi, pi]
  double y = std::remainder(x, 2.0 * kPi);
  return y;
}

// 1D periodic band: two arcs centered at +-center with given half-width on
// the circle of circumference 2 pi. Returns total arc length (union).
double arc_union_measure(double center, double half_width) {
  if (half_width <= 0) return 0;
  if (half_width >= kPi) return 2.0 * kPi;
  const double c = std::abs(wrap_to_pi(center));
  // Arcs [c-h, c+h] and [-c-h, -c+h] on the circle; they overlap near 0 when
  // c < h and near pi when pi - c < h.
  double total = 4.0 * half_width;
  if (c < half_width) total -= 2.0 * (half_width - c);
  if (kPi - c < half_width) total -= 2.0 * (half_width - (kPi - c));
  return std::min(total, 2.0 * kPi);
}

bool in_periodic_band(double x, double center, double half_width) {
  const double d1 = std::abs(wrap_to_pi(x - center));
  const double d2 = std::abs(wrap_to_pi(x + center));
  return d1 < half_width || d2 < half_width;
}

}  // namespace

ObservabilityConstants compute_constants(const Trajectory& u,
                                         const Potential& V, double R0,
                                         double M) {
  if (R0 <= 0) throw std::invalid_argument("R0 must be positive");
  if (M < 4.0 * R0 + 1.0)
    throw std::invalid_argument(
        "observability requires M >= 4*R0 + 1 (got M = " + std::to_string(M) +
        ", R0 = " + std::to_string(R0) + ")");
  if (u.slices.empty()) throw std::invalid_argument("empty trajectory");
  if (M > u.grid.half_width)
    throw std::invalid_argument(
        "ball of radius M leaves the box; enlarge half_width");
  ObservabilityConstants c;
  c.R0 = R0;
  c.M = M;
  c.L = V.sup_bound;

  WaveField w0{u.grid, u.slices.front()};
  c.c0_sq = quadrature_density(w0, region_ball(R0));

  const Region ballM = region_ball(M);
  double peak = 0;
  for (const auto& s : u.slices) {
    WaveField w{u.grid, s};
    const double h1 = quadrature_density(w, ballM) +
                      quadrature_gradient_density(w, ballM);
    peak = std::max(peak, h1);
  }
  c.A_sq = peak;
  c.zero_data = (c.c0_sq == 0);
  return c;
}

double t_star(const ObservabilityConstants& c) {
  if (c.zero_data || c.c0_sq <= 0 || c.A_sq <= 0) return 0;
  const double A = std::sqrt(c.A_sq);
  const double c0 = std::sqrt(c.c0_sq);
  double v = std::min(std::pow(c0 / A, 4) / 16384.0, c.R0 * c.R0);
  if (c.L > 0) {
    v = std::min(v, 256.0 * A / (c0 * c.L));
    v = std::min(v, 1.0 / (c.L * c.L));
  }
  return v;
}

double region_measure(const Grid& g, const RegionQuery& q, double s) {
  if (q.rho <= 0 || q.t <= 0)
    throw std::invalid_argument("rho and t must be positive");
  const double hw = q.band_factor * q.rho * std::sqrt(q.t);
  if (q.periodic) {
    if (g.dim != 1)
      throw std::invalid_argument(
          "periodic band regions are only supported in one dimension");
    const double center = q.rho * s / q.t;
    return arc_union_measure(center, std::min(hw, kPi));
  }
  const double center = q.rho * (1.0 + s / q.t);
  const double lo = center - hw;
  const double hi = center + hw;
  if (hi > g.half_width)
    throw std::invalid_argument(
        "observation band | |y| - " + std::to_string(center) + " | < " +
        std::to_string(hw) + " leaves the box; enlarge half_width");
  if (g.dim == 1) return 2.0 * (hi - std::max(lo, 0.0));
  const double rlo = std::max(lo, 0.0);
  return kPi * (hi * hi - rlo * rlo);
}

struct ObservabilityEvaluator::Impl {
  Trajectory u;
  std::vector<std::vector<double>> abs2;
  std::vector<std::vector<double>> grad2;
};

ObservabilityEvaluator::ObservabilityEvaluator(const Trajectory& u)
    : impl_(std::make_unique<Impl>()) {
  if (u.slices.empty()) throw std::invalid_argument("empty trajectory");
  impl_->u = u;
  impl_->abs2.reserve(u.slices.size());
  impl_->grad2.reserve(u.slices.size());
  for (const auto& s : u.slices) {
    std::vector<double> a(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) a[j] = std::norm(s[j]);
    impl_->abs2.push_back(std::move(a));
    impl_->grad2.push_back(gradient_density(u.grid, s));
  }
}

ObservabilityEvaluator::~ObservabilityEvaluator() = default;

const Trajectory& ObservabilityEvaluator::trajectory() const {
  return impl_->u;
}

JResult ObservabilityEvaluator::functional(const RegionQuery& q) const {
  const Trajectory& u = impl_->u;
  if (q.rho <= 0 || q.t <= 0)
    throw std::invalid_argument("rho and t must be positive");
  const double s_lo = q.t / 4.0;
  const double s_hi = 3.0 * q.t;
  const long k_lo = slice_index(u, s_lo);
  const long k_hi = slice_index(u, s_hi);
  if (k_lo < 0 || k_hi < 0)
    throw std::invalid_argument(
        "window [t/4, 3t] endpoints must land on stored slices: need t to be "
        "a multiple of 4*(store spacing) and 3t within the stored range");
  const double hw_band = q.band_factor * q.rho * std::sqrt(q.t);
  const double h = u.grid.spacing();
  const double hw_eff = q.periodic ? std::min(hw_band, kPi) : hw_band;
  if (2.0 * hw_eff < 8.0 * h)
    throw std::invalid_argument(
        "observation band spans fewer than 8 grid cells (width " +
        std::to_string(2.0 * hw_eff) + ", spacing " + std::to_string(h) +
        "); refine the grid or enlarge rho*sqrt(t)");

  const long n = k_hi - k_lo;
  if (n < 1)
    throw std::invalid_argument("window [t/4, 3t] holds fewer than two slices");
  std::vector<double> mass_terms(static_cast<std::size_t>(n) + 1);
  std::vector<double> grad_terms(static_cast<std::size_t>(n) + 1);
  for (long k = k_lo; k <= k_hi; ++k) {
    const double s = u.time(static_cast<std::size_t>(k));
    Region reg;
    if (q.periodic) {
      const double center = q.rho * s / q.t;
      const double hwp = std::min(hw_band, kPi);
      reg = [center, hwp](double x, double) {
        return in_periodic_band(x, center, hwp);
      };
    } else {
      reg = region_band(q.rho * (1.0 + s / q.t), hw_band);
      (void)region_measure(u.grid, q, s);  // validates containment
    }
    const double m = quadrature_pointwise(
        u.grid, impl_->abs2[static_cast<std::size_t>(k)], reg);
    const double gd = quadrature_pointwise(
        u.grid, impl_->grad2[static_cast<std::size_t>(k)], reg);
    const double trap = (k == k_lo || k == k_hi) ? 0.5 : 1.0;
    mass_terms[static_cast<std::size_t>(k - k_lo)] = trap * m;
    grad_terms[static_cast<std::size_t>(k - k_lo)] = trap * s * gd;
  }
  JResult r;
  r.slices_used = static_cast<int>(n) + 1;
  const double w = u.dt / q.t;
  r.J_mass = w * pairwise_sum(mass_terms.data(), mass_terms.size());
  r.J_grad = w * pairwise_sum(grad_terms.data(), grad_terms.size());
  r.J = r.J_mass + r.J_grad;
  return r;
}

JResult observability_functional(const Trajectory& u, const RegionQuery& q) {
  return ObservabilityEvaluator(u).functional(q);
}

FitResult decay_fit(const std::vector<RegionQuery>& queries,
                    const std::vector<double>& J_values) {
  if (queries.size() != J_values.size())
    throw std::invalid_argument("queries and values differ in length");
  if (queries.size() < 5)
    throw std::invalid_argument("decay fit needs at least 5 samples");
  const std::size_t n = queries.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(J_values[i] > 0))
      throw std::invalid_argument(
          "decay fit needs strictly positive functional values (sample " +
          std::to_string(i) + " is " + std::to_string(J_values[i]) + ")");
    x[i] = queries[i].rho * queries[i].rho / queries[i].t;
    y[i] = std::log(J_values[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0)
    throw std::invalid_argument("decay fit needs at least two distinct "
                                "rho^2/t abscissae");
  FitResult f;
  f.n = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  // constant-within-roundoff data is a perfect fit, not a degenerate one
  const double tiny =
      static_cast<double>(n) * 1e-28 * (1.0 + my * my);
  f.r_sq = (syy <= tiny) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

LowerBoundResult lower_bound_check(const ObservabilityEvaluator& ev,
                                   const RegionQuery& q,
                                   const ObservabilityConstants& c,
                                   double c_fit) {
  LowerBoundResult r;
  if (c.zero_data) {
    r.skipped = true;
    r.pass = true;
    return r;
  }
  const double ts = t_star(c);
  if (!(q.t < ts))
    throw std::invalid_argument(
        "certificate applies only below the small-time threshold t* = " +
        std::to_string(ts) + " (got t = " + std::to_string(q.t) + ")");
  if (q.rho < c.R0 || q.rho > c.M)
    throw std::invalid_argument(
        "certificate applies for R0 <= rho <= M (got rho = " +
        std::to_string(q.rho) + ")");
  const JResult jr = ev.functional(q);
  r.J = jr.J;
  if (jr.J <= 0) {
    r.log_margin = -kInf;
    r.pass = false;
    return r;
  }
  r.log_margin =
      c_fit * q.rho * q.rho / q.t + std::log(jr.J) - std::log(c.c0_sq);
  r.pass = r.log_margin >= 0;
  return r;
}

ProbeResult uniqueness_probe(const ObservabilityEvaluator& ev, double c,
                             ProbeMode mode,
                             const std::vector<RegionQuery>& samples) {
  if (samples.size() < 4)
    throw std::invalid_argument("probe needs at least 4 samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const bool ok = (mode == ProbeMode::TimeToZero)
                        ? (samples[i].t < samples[i - 1].t &&
                           samples[i].rho == samples[0].rho)
                        : (samples[i].rho > samples[i - 1].rho &&
                           samples[i].t == samples[0].t);
    if (!ok)
      throw std::invalid_argument(
          mode == ProbeMode::TimeToZero
              ? "time probe needs strictly decreasing t at fixed rho"
              : "radius probe needs strictly increasing rho at fixed t");
  }
  ProbeResult r;
  std::vector<double> Q_log;
  bool all_zero = true;
  for (const auto& q : samples) {
    const JResult jr = ev.functional(q);
    r.J_values.push_back(jr.J);
    if (jr.J > 0) {
      all_zero = false;
      Q_log.push_back(c * q.rho * q.rho / q.t + std::log(jr.J));
    } else {
      Q_log.push_back(-kInf);
    }
  }
  r.log_values = Q_log;
  if (all_zero) {
    r.verdict = ProbeVerdict::ToZero;
    return r;
  }
  // Ratios Q_{i+1}/Q_i over the last three steps.
  const std::size_t n = Q_log.size();
  bool all_up = true, all_down = true;
  for (std::size_t i = n - 3; i < n; ++i) {
    const double dlog = Q_log[i] - Q_log[i - 1];
    if (!(dlog > std::log(1.5))) all_up = false;
    if (!(dlog < std::log(2.0 / 3.0))) all_down = false;
  }
  if (all_up)
    r.verdict = ProbeVerdict::Diverges;
  else if (all_down)
    r.verdict = ProbeVerdict::ToZero;
  else
    r.verdict = ProbeVerdict::Bounded;
  return r;
}

double annulus_energy(const Trajectory& u, double r_lo, double r_hi) {
  if (!(r_hi > r_lo) || r_lo < 0)
    throw std::invalid_argument("need 0 <= r_lo < r_hi");
  if (u.slices.size() < 2)
    throw std::invalid_argument("need at least two slices");
  const Region ann = region_annulus(r_lo, r_hi);
  std::vector<double> terms(u.slices.size());
  for (std::size_t k = 0; k < u.slices.size(); ++k) {
    WaveField w{u.grid, u.slices[k]};
    const double v =
        quadrature_density(w, ann) + quadrature_gradient_density(w, ann);
    const double trap = (k == 0 || k + 1 == u.slices.size()) ? 0.5 : 1.0;
    terms[k] = trap * v;
  }
  return u.dt * pairwise_sum(terms.data(), terms.size());
}

}  // namespace schrodlab
