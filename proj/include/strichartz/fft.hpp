#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace strichartz {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Unnormalized in-place DFT. sign = -1 is the forward transform
// sum_j a_j e^{-2 pi i jk/n}; sign = +1 the backward one (no 1/n).
void dft_inplace(cvec& data, int sign);
void dft_inplace(cplx* data, std::size_t n, int sign);

std::size_t next_pow2(std::size_t n);
bool is_pow2(std::size_t n);

}  // namespace strichartz
