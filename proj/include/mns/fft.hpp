#pragma once

#include "mns/grid.hpp"

#include <complex>
#include <vector>

namespace mns::fft {

using cplx = std::complex<double>;

/// In-place forward DFT (physical -> spectral), scaled by 1/N^d so the
/// output holds Fourier-series coefficients.
void forward(const Grid& grid, cplx* data);

/// In-place backward DFT (spectral -> physical), unscaled.
void backward(const Grid& grid, cplx* data);

void forward(const Grid& grid, std::vector<cplx>& data);
void backward(const Grid& grid, std::vector<cplx>& data);

} // namespace mns::fft
