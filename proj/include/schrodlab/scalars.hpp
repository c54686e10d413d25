#pragma once
#include <string>
#include <vector>

namespace schrodlab {

// Scalar functions attached to the normalized dilation family with ratio
// gamma > 0: the dilation factor alpha(t), the chirp coefficient beta(t), and
// the time reparametrization s(t) with inverse t(s).
double alpha_of_t(double gamma, double t);
double beta_of_t(double gamma, double t);
double s_of_t(double gamma, double t);
double t_of_s(double gamma, double s);
double dt_ds(double gamma, double s);

struct Interval {
  double lo = 0, hi = 0;
  double length() const { return hi - lo; }
};

// Images under s(.) of the inner window [3/8, 5/8] and outer window [1/4, 3/4].
Interval s_interval_inner(double gamma);
Interval s_interval_outer(double gamma);

// One named scalar inequality with its observed worst margin
// (margin >= 0 means the bound held at every sample).
struct BoundCheck {
  std::string name;
  bool pass = false;
  double worst_margin = 0;
};

struct ScalarBoundsReport {
  double gamma = 0;
  int samples = 0;
  bool all_pass = false;
  std::vector<BoundCheck> checks;
};

// Samples the envelope/chirp/reparametrization bounds used downstream:
// alpha in [1/sqrt(g), 3/sqrt(g)] on [3/8,5/8] and [1/sqrt(g), 4/sqrt(g)] on
// [1/4,3/4]; beta in [0,4] on [1/4,3/4]; interval lengths 1/(4g) <= |inner|
// <= 2/g and 1/(2g) <= |outer| <= 3/g; dt/ds in [g/8, g] on inner and
// [g/16, g] on outer; the exact identity sqrt(g)*alpha(t) = 1 + s(t)(g-1);
// monotonicity of s. Requires gamma > 16 and samples >= 100.
ScalarBoundsReport check_scalar_bounds(double gamma, int samples);

}  // namespace schrodlab
