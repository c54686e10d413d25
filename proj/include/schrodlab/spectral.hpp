#pragma once
#include <vector>

#include "schrodlab/field.hpp"

namespace schrodlab {

// Spectral partial derivatives, one vector per axis. The Nyquist mode is
// dropped (its first derivative is sign-ambiguous on the real grid).
std::vector<std::vector<cplx>> spectral_gradient(const Grid& g,
                                                 const std::vector<cplx>& u);

// Spectral Laplacian; keeps the full -|k|^2 multiplier including Nyquist.
std::vector<cplx> spectral_laplacian(const Grid& g, const std::vector<cplx>& u);

// Exact free step: u <- exp(i t Laplacian) u via the e^{-i t |k|^2} multiplier.
void apply_free_multiplier(const Grid& g, std::vector<cplx>& u, double t);

// Pointwise |grad u|^2 summed over axes.
std::vector<double> gradient_density(const Grid& g, const std::vector<cplx>& u);

double l2_norm(const Grid& g, const std::vector<cplx>& u);  // weighted by h^dim
double plancherel_gap(const Grid& g, const std::vector<cplx>& u);  // relative

}  // namespace schrodlab
