#include "schrodlab/scalars.hpp"

#include <cmath>
#include <stdexcept>

namespace schrodlab {

double alpha_of_t(double gamma, double t) {
  const double rg = std::sqrt(gamma);
  return 1.0 / (rg * (1.0 - t) + t / rg);
}

double beta_of_t(double gamma, double t) {
  return 1.0 / ((1.0 - t) + t / gamma) - 1.0 / (gamma * (1.0 - t) + t);
}

double s_of_t(double gamma, double t) {
  return t / (gamma * (1.0 - t) + t);
}

double t_of_s(double gamma, double s) {
  return s * gamma / (1.0 + s * (gamma - 1.0));
}

double dt_ds(double gamma, double s) {
  const double d = 1.0 + s * (gamma - 1.0);
  return gamma / (d * d);
}

Interval s_interval_inner(double gamma) {
  return Interval{3.0 / (5.0 * gamma + 3.0), 5.0 / (3.0 * gamma + 5.0)};
}

Interval s_interval_outer(double gamma) {
  return Interval{1.0 / (3.0 * gamma + 1.0), 3.0 / (gamma + 3.0)};
}

namespace {

// margin >= 0 iff lo <= value <= hi; margin is the distance to the nearer
// violated edge, normalized by the bound scale.
double range_margin(double value, double lo, double hi) {
  double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
  return std::min(value - lo, hi - value) / scale;
}

void fold(BoundCheck& c, double margin) {
  if (margin < c.worst_margin) c.worst_margin = margin;
  if (c.worst_margin < 0) c.pass = false;
}

}  // namespace

ScalarBoundsReport check_scalar_bounds(double gamma, int samples) {
  if (!(gamma > 16.0))
    throw std::invalid_argument(
        "check_scalar_bounds: requires gamma > 16, got " +
        std::to_string(gamma));
  if (samples < 100)
    throw std::invalid_argument("check_scalar_bounds: need samples >= 100");

  const double rg = std::sqrt(gamma);
  ScalarBoundsReport rep;
  rep.gamma = gamma;
  rep.samples = samples;

  auto mk = [](const std::string& name) {
    BoundCheck c;
    c.name = name;
    c.pass = true;
    c.worst_margin = 1e300;
    return c;
  };
  BoundCheck alpha_inner = mk("alpha_range_inner_window");
  BoundCheck alpha_outer = mk("alpha_range_outer_window");
  BoundCheck beta_outer = mk("beta_range_outer_window");
  BoundCheck len_inner = mk("inner_interval_length");
  BoundCheck len_outer = mk("outer_interval_length");
  BoundCheck speed_inner = mk("dt_ds_range_inner");
  BoundCheck speed_outer = mk("dt_ds_range_outer");
  BoundCheck ident = mk("alpha_reparametrization_identity");
  BoundCheck mono = mk("s_monotone_increasing");
  BoundCheck endpoints = mk("interval_endpoint_formulas");

  // dense windows in t
  for (int i = 0; i < samples; ++i) {
    double f = static_cast<double>(i) / (samples - 1);
    double t_in = 0.375 + 0.25 * f;   // [3/8, 5/8]
    double t_out = 0.25 + 0.5 * f;    // [1/4, 3/4]
    fold(alpha_inner, range_margin(alpha_of_t(gamma, t_in), 1.0 / rg, 3.0 / rg));
    fold(alpha_outer, range_margin(alpha_of_t(gamma, t_out), 1.0 / rg, 4.0 / rg));
    fold(beta_outer, range_margin(beta_of_t(gamma, t_out), 0.0, 4.0));

    // exact identity sqrt(g) alpha(t) = 1 + s(t)(g - 1), checked t-primary
    // (1 - t is exact for t in [1/2,1] and accurate below; composing through
    // t_of_s(s) instead loses the 1-t information near t = 1).
    double t = f;
    double lhs = rg * alpha_of_t(gamma, t);
    double rhs = 1.0 + s_of_t(gamma, t) * (gamma - 1.0);
    double rel = std::abs(lhs - rhs) / rhs;
    fold(ident, 1e-12 - rel);
  }

  // monotonicity of s on a dense grid
  double prev = s_of_t(gamma, 0.0);
  for (int i = 1; i < samples; ++i) {
    double t = static_cast<double>(i) / (samples - 1);
    double cur = s_of_t(gamma, t);
    fold(mono, cur - prev);
    prev = cur;
  }

  // interval endpoints match the closed forms
  {
    Interval inner = s_interval_inner(gamma);
    Interval outer = s_interval_outer(gamma);
    auto close = [](double a, double b) {
      return 1e-13 - std::abs(a - b) / std::max(std::abs(b), 1e-300);
    };
    fold(endpoints, close(s_of_t(gamma, 3.0 / 8.0), inner.lo));
    fold(endpoints, close(s_of_t(gamma, 5.0 / 8.0), inner.hi));
    fold(endpoints, close(s_of_t(gamma, 0.25), outer.lo));
    fold(endpoints, close(s_of_t(gamma, 0.75), outer.hi));

    fold(len_inner, range_margin(inner.length(), 0.25 / gamma, 2.0 / gamma));
    fold(len_outer, range_margin(outer.length(), 0.5 / gamma, 3.0 / gamma));

    // dt/ds ranges on the s-intervals (dense + endpoints; dt/ds is monotone
    // decreasing in s, so the endpoints are the extremes)
    for (int i = 0; i < samples; ++i) {
      double f = static_cast<double>(i) / (samples - 1);
      double si = inner.lo + f * inner.length();
      double so = outer.lo + f * outer.length();
      fold(speed_inner, range_margin(dt_ds(gamma, si), gamma / 8.0, gamma));
      fold(speed_outer, range_margin(dt_ds(gamma, so), gamma / 16.0, gamma));
    }
  }

  rep.checks = {alpha_inner, alpha_outer, beta_outer, len_inner, len_outer,
                speed_inner, speed_outer, ident, mono, endpoints};
  rep.all_pass = true;
  for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace schrodlab
