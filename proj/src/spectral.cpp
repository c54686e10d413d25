#include "schrodlab/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "schrodlab/fft.hpp"
#include "schrodlab/summation.hpp"

namespace schrodlab {

std::vector<std::vector<cplx>> spectral_gradient(const Grid& g,
                                                 const std::vector<cplx>& u) {
  if (u.size() != g.size())
    throw std::invalid_argument("spectral_gradient: size mismatch");
  const std::vector<double> k = g.wavenumbers();
  std::vector<cplx> hat = fft_forward(g, u);
  std::vector<std::vector<cplx>> out;
  out.reserve(g.dim);
  const int nyq = g.n / 2;
  for (int axis = 0; axis < g.dim; ++axis) {
    std::vector<cplx> dhat(hat.size());
    if (g.dim == 1) {
      for (int j = 0; j < g.n; ++j)
        dhat[j] = (j == nyq) ? cplx{0, 0} : cplx(0, k[j]) * hat[j];
    } else {
      for (int jx = 0; jx < g.n; ++jx)
        for (int jy = 0; jy < g.n; ++jy) {
          int j = axis == 0 ? jx : jy;
          std::size_t idx = g.flat(jx, jy);
          dhat[idx] = (j == nyq) ? cplx{0, 0} : cplx(0, k[j]) * hat[idx];
        }
    }
    out.push_back(fft_inverse(g, dhat));
  }
  return out;
}

std::vector<cplx> spectral_laplacian(const Grid& g, const std::vector<cplx>& u) {
  if (u.size() != g.size())
    throw std::invalid_argument("spectral_laplacian: size mismatch");
  const std::vector<double> k = g.wavenumbers();
  std::vector<cplx> hat = fft_forward(g, u);
  if (g.dim == 1) {
    for (int j = 0; j < g.n; ++j) hat[j] *= -k[j] * k[j];
  } else {
    for (int jx = 0; jx < g.n; ++jx)
      for (int jy = 0; jy < g.n; ++jy)
        hat[g.flat(jx, jy)] *= -(k[jx] * k[jx] + k[jy] * k[jy]);
  }
  return fft_inverse(g, hat);
}

void apply_free_multiplier(const Grid& g, std::vector<cplx>& u, double t) {
  if (u.size() != g.size())
    throw std::invalid_argument("apply_free_multiplier: size mismatch");
  const std::vector<double> k = g.wavenumbers();
  std::vector<cplx> hat = fft_forward(g, u);
  if (g.dim == 1) {
    for (int j = 0; j < g.n; ++j)
      hat[j] *= std::exp(cplx(0, -t * k[j] * k[j]));
  } else {
    for (int jx = 0; jx < g.n; ++jx)
      for (int jy = 0; jy < g.n; ++jy)
        hat[g.flat(jx, jy)] *=
            std::exp(cplx(0, -t * (k[jx] * k[jx] + k[jy] * k[jy])));
  }
  fft_inverse(g, hat.data(), u.data());
}

std::vector<double> gradient_density(const Grid& g, const std::vector<cplx>& u) {
  auto grads = spectral_gradient(g, u);
  std::vector<double> out(u.size(), 0.0);
  for (const auto& axis : grads)
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += std::norm(axis[i]);
  return out;
}

double l2_norm(const Grid& g, const std::vector<cplx>& u) {
  std::vector<double> cells(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) cells[i] = std::norm(u[i]);
  return std::sqrt(g.cell_volume() * pairwise_sum(cells));
}

double plancherel_gap(const Grid& g, const std::vector<cplx>& u) {
  std::vector<cplx> hat = fft_forward(g, u);
  std::vector<double> phys(u.size()), spec(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    phys[i] = std::norm(u[i]);
    spec[i] = std::norm(hat[i]);
  }
  double a = pairwise_sum(phys);
  double b = pairwise_sum(spec) / static_cast<double>(g.size());
  double denom = std::max(a, 1e-300);
  return std::abs(a - b) / denom;
}

}  // namespace schrodlab
