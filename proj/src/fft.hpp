#pragma once

#include <complex>
#include <span>

namespace tfuncert::detail {

// Unnormalized in-place DFT of an n^dim row-major array.
// forward: Σ x_j e^{-2πi jk/n}; backward: Σ x_j e^{+2πi jk/n}.
void dft_inplace(std::span<std::complex<double>> data, int n, int dim, bool forward);

// Multiplies entry (j1[,j2]) by (-1)^{j1 + j2}. This is the phase that moves
// a centered grid onto DFT index order (see transforms.cpp).
void checkerboard_inplace(std::span<std::complex<double>> data, int n, int dim);

}  // namespace tfuncert::detail
