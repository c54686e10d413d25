#include "schrodlab/spacetime.hpp"

#include <cmath>
#include <stdexcept>

#include "schrodlab/summation.hpp"

namespace schrodlab {

SpaceTimeField from_trajectory(const Trajectory& t) {
  SpaceTimeField f;
  f.grid = t.grid;
  f.t0 = t.t0;
  f.dt = t.dt;
  f.slices = t.slices;
  return f;
}

SpaceTimeField time_derivative4(const SpaceTimeField& f) {
  if (f.n_slices() < 5)
    throw std::invalid_argument("time_derivative4: need at least 5 slices");
  if (!(f.dt > 0))
    throw std::invalid_argument("time_derivative4: dt must be positive");
  SpaceTimeField out;
  out.grid = f.grid;
  out.t0 = f.t0;
  out.dt = f.dt;
  const std::size_t K = f.n_slices();
  const std::size_t M = f.grid.size();
  out.slices.assign(K, std::vector<cplx>(M, cplx{0, 0}));
  auto at = [&](std::ptrdiff_t k, std::size_t j) -> cplx {
    if (k < 0 || k >= static_cast<std::ptrdiff_t>(K)) return cplx{0, 0};
    return f.slices[static_cast<std::size_t>(k)][j];
  };
  const double inv = 1.0 / (12.0 * f.dt);
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(K); ++k)
    for (std::size_t j = 0; j < M; ++j)
      out.slices[k][j] = (-at(k + 2, j) + 8.0 * at(k + 1, j) -
                          8.0 * at(k - 1, j) + at(k - 2, j)) *
                         inv;
  return out;
}

bool check_compact_support(const SpaceTimeField& f, double tol,
                           std::string* why) {
  double peak = 0;
  for (const auto& s : f.slices)
    for (const cplx& v : s) peak = std::max(peak, std::abs(v));
  if (peak == 0) return true;
  const double cut = tol * peak;
  const std::size_t K = f.n_slices();
  for (std::size_t k = 0; k < K; ++k) {
    const bool end_slice = k < 2 || k + 2 >= K;
    for (std::size_t j = 0; j < f.slices[k].size(); ++j) {
      double a = std::abs(f.slices[k][j]);
      if (a <= cut) continue;
      if (end_slice) {
        if (why)
          *why = "field does not vanish on the first/last two time slices "
                 "(slice " + std::to_string(k) + ")";
        return false;
      }
      int ix = f.grid.dim == 1 ? static_cast<int>(j)
                               : static_cast<int>(j) / f.grid.n;
      int iy = f.grid.dim == 1 ? 0 : static_cast<int>(j) % f.grid.n;
      bool near = ix < 3 || ix >= f.grid.n - 3;
      if (f.grid.dim == 2) near = near || iy < 3 || iy >= f.grid.n - 3;
      if (near) {
        if (why)
          *why = "field does not vanish within 3 cells of the box edge; "
                 "enlarge the box";
        return false;
      }
    }
  }
  return true;
}

double st_norm(const SpaceTimeField& f) {
  std::vector<double> parts;
  parts.reserve(f.n_slices());
  for (const auto& s : f.slices) {
    std::vector<double> cells(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) cells[j] = std::norm(s[j]);
    parts.push_back(pairwise_sum(cells));
  }
  return std::sqrt(f.grid.cell_volume() * f.dt * pairwise_sum(parts));
}

cplx st_inner(const SpaceTimeField& f, const SpaceTimeField& g) {
  if (!f.grid.same_as(g.grid) || f.n_slices() != g.n_slices())
    throw std::invalid_argument("st_inner: shape mismatch");
  std::vector<cplx> parts;
  parts.reserve(f.n_slices());
  for (std::size_t k = 0; k < f.n_slices(); ++k) {
    std::vector<cplx> cells(f.slices[k].size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      cells[j] = f.slices[k][j] * std::conj(g.slices[k][j]);
    parts.push_back(pairwise_sum(cells));
  }
  return f.grid.cell_volume() * f.dt * pairwise_sum(parts);
}

}  // namespace schrodlab
