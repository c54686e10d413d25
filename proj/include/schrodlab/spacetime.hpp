#pragma once
#include <string>
#include <vector>

#include "schrodlab/field.hpp"

namespace schrodlab {

// Space-time sample block on grid x uniform times [t0, t0 + dt*(slices-1)].
struct SpaceTimeField {
  Grid grid;
  double t0 = 0;
  double dt = 0;
  std::vector<std::vector<cplx>> slices;

  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
  std::size_t n_slices() const { return slices.size(); }
};

SpaceTimeField from_trajectory(const Trajectory& t);

// 4th-order centered time derivative with two-slice zero extension at both
// ends; valid for fields that vanish on the first/last two slices. The
// stencil matrix is exactly antisymmetric.
SpaceTimeField time_derivative4(const SpaceTimeField& f);

// Compact support in the sense required by the weighted-operator identities:
// vanishing (<= tol * max|f|) on the first/last two slices and within three
// cells of the spatial box edge. Returns false and an explanation otherwise.
bool check_compact_support(const SpaceTimeField& f, double tol,
                           std::string* why = nullptr);

// Space-time L2 norm, h^dim * dt weighted.
double st_norm(const SpaceTimeField& f);
// Space-time inner product <f, g>.
cplx st_inner(const SpaceTimeField& f, const SpaceTimeField& g);

}  // namespace schrodlab
