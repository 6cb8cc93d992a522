#pragma once

#include "torus_nls/lattice.hpp"

namespace tnls::detail {

// In-place unnormalized 3-D DFT of an n^3 array allocated with fftw_malloc.
// sign = +1 computes sum a_k exp(+2 pi i k.j / n) (synthesis), -1 the analysis sum.
void fft3d(cplx* data, int n, int sign);

}  // namespace tnls::detail
