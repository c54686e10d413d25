#pragma once
#include <functional>

#include "schrodlab/field.hpp"

namespace schrodlab {

// Region predicate over physical coordinates; the second argument is unused
// in one dimension. Quadrature is the h^dim-weighted pairwise sum over the
// grid points the predicate accepts; an empty region integrates to zero.
using Region = std::function<bool(double, double)>;

Region region_all();
Region region_ball(double radius, double cx = 0, double cy = 0);
Region region_annulus(double r_lo, double r_hi);
// { x : | |x| - center | < half_width }
Region region_band(double center, double half_width);

double quadrature_density(const WaveField& u, const Region& region);
double quadrature_gradient_density(const WaveField& u, const Region& region);
cplx quadrature_inner(const WaveField& u, const WaveField& w,
                      const Region& region);

// Generic real-valued integrand sampled per cell.
double quadrature_pointwise(const Grid& g, const std::vector<double>& cell_values,
                            const Region& region);

}  // namespace schrodlab
