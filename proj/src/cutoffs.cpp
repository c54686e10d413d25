#include "schrodlab/cutoffs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace schrodlab {
namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// S_N(x) = sum_{m=0}^{N} (-1)^m C(N+m, m) C(2N+1, N-m) x^{N+m+1};
// monotone on [0,1], derivatives 1..N vanish at both ends.
const std::vector<double>& coeffs(int N) {
  static std::vector<std::vector<double>> cache(32);
  if (N < 1 || N > 16)
    throw std::invalid_argument("smoothstep: order must be in [1, 16]");
  auto& c = cache[N];
  if (c.empty()) {
    c.resize(N + 1);
    for (int m = 0; m <= N; ++m)
      c[m] = (m % 2 ? -1.0 : 1.0) * binom(N + m, m) * binom(2 * N + 1, N - m);
  }
  return c;
}

double poly_eval(const std::vector<double>& c, int N, double x, int deriv) {
  // term m: c[m] * x^{N+m+1}, differentiated `deriv` times
  double acc = 0;
  for (int m = N; m >= 0; --m) {
    double coef = c[m];
    int p = N + m + 1;
    for (int d = 0; d < deriv; ++d) coef *= (p - d);
    acc = acc * x + coef;  // Horner over m; powers aligned below
  }
  // acc is sum c'_m x^m; multiply the common power x^{N+1-deriv}
  return acc * std::pow(x, N + 1 - deriv);
}

}  // namespace

double smoothstep(int order, double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  return poly_eval(coeffs(order), order, u, 0);
}

double smoothstep_d1(int order, double u) {
  if (u <= 0 || u >= 1) return 0;
  return poly_eval(coeffs(order), order, u, 1);
}

double smoothstep_d2(int order, double u) {
  if (u <= 0 || u >= 1) return 0;
  return poly_eval(coeffs(order), order, u, 2);
}

double CutoffSet::theta(double r) const {
  if (r <= R) return 1;
  if (r >= R + 1) return 0;
  return 1.0 - smoothstep(order, r - R);
}

double CutoffSet::theta_d(double r) const {
  if (r <= R || r >= R + 1) return 0;
  return -smoothstep_d1(order, r - R);
}

double CutoffSet::eta(double a) const {
  if (a <= 1.5) return 0;
  if (a >= 2.0) return 1;
  return smoothstep(order, (a - 1.5) * 2.0);
}

double CutoffSet::phi(double t) const {
  if (t <= 0.25 || t >= 0.75) return 0;
  if (t < 0.375) return 4.0 * smoothstep(order, 8.0 * (t - 0.25));
  if (t <= 0.625) return 4.0;
  return 4.0 * smoothstep(order, 8.0 * (0.75 - t));
}

double CutoffSet::phi_d(double t) const {
  if (t <= 0.25 || t >= 0.75) return 0;
  if (t < 0.375) return 32.0 * smoothstep_d1(order, 8.0 * (t - 0.25));
  if (t <= 0.625) return 0;
  return -32.0 * smoothstep_d1(order, 8.0 * (0.75 - t));
}

double CutoffSet::phi_dd(double t) const {
  if (t <= 0.25 || t >= 0.75) return 0;
  if (t < 0.375) return 256.0 * smoothstep_d2(order, 8.0 * (t - 0.25));
  if (t <= 0.625) return 0;
  return 256.0 * smoothstep_d2(order, 8.0 * (0.75 - t));
}

CutoffSet build_cutoffs(double R, int order) {
  if (!(R >= 2.0))
    throw std::invalid_argument(
        "build_cutoffs: R must be >= 2 (keeps the radial plateau clear of the "
        "shifted annular cutoff while the time window is closed), got " +
        std::to_string(R));
  if (order < 4)
    throw std::invalid_argument(
        "build_cutoffs: smoothness order must be >= 4 for the 4th-order time "
        "stencil to converge cleanly");
  CutoffSet c;
  c.R = R;
  c.order = order;
  double sup1 = 0, sup2 = 0;
  const int nsamp = 4097;
  for (int i = 0; i <= nsamp; ++i) {
    double u = static_cast<double>(i) / nsamp;
    sup1 = std::max(sup1, std::abs(smoothstep_d1(order, u)));
    sup2 = std::max(sup2, std::abs(smoothstep_d2(order, u)));
  }
  c.sup_phi_d = 32.0 * sup1;
  c.sup_phi_dd = 256.0 * sup2;
  return c;
}

}  // namespace schrodlab
