#pragma once

namespace schrodlab {

// Generalized smoothstep S_k: [0,1] -> [0,1], C^k at both ends, monotone.
// Arguments outside [0,1] clamp. Derivatives are exact polynomial forms.
double smoothstep(int order, double u);
double smoothstep_d1(int order, double u);
double smoothstep_d2(int order, double u);

// The cutoff family used by the weighted-estimate machinery:
//   theta(r): 1 on r <= R, smooth descent to 0 across [R, R+1]
//   eta(a):   0 on a <= 3/2, smooth ascent to 1 across [3/2, 2]
//   phi(t):   0 on [0,1/4] and [3/4,1], plateau value 4 on [3/8,5/8],
//             smooth ramps of width 1/8
// phi drives the moving center x/R + phi(t) e1 of the weight.
struct CutoffSet {
  double R = 2;
  int order = 4;

  double theta(double r) const;
  double theta_d(double r) const;  // d/dr
  double eta(double a) const;
  double phi(double t) const;
  double phi_d(double t) const;
  double phi_dd(double t) const;

  double sup_phi_d = 0;   // sampled sup |phi'|
  double sup_phi_dd = 0;  // sampled sup |phi''|
};

// Requires R >= 2 (keeps the supports of theta and the shifted eta disjoint
// while the window is closed) and order >= 4.
CutoffSet build_cutoffs(double R, int order);

}  // namespace schrodlab
