#pragma once
#include <vector>

#include "schrodlab/grid.hpp"

namespace schrodlab {

// Thin FFTW wrapper. Plans are cached per shape behind a mutex and reused
// via the new-array execute interface, so concurrent transforms on distinct
// buffers are safe. Forward is unnormalized; inverse divides by the size.
void fft_forward(const Grid& g, const cplx* in, cplx* out);
void fft_inverse(const Grid& g, const cplx* in, cplx* out);

std::vector<cplx> fft_forward(const Grid& g, const std::vector<cplx>& in);
std::vector<cplx> fft_inverse(const Grid& g, const std::vector<cplx>& in);

}  // namespace schrodlab
