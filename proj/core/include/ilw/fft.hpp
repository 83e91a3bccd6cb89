#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ilw::fft {

using cplx = std::complex<double>;

// Smallest 2^a 3^b 5^c that is >= n.
std::size_t good_size(std::size_t n);

// In-place unnormalized transforms: forward uses e^{-2πi jk/M}, backward e^{+2πi jk/M}.
// Plans are cached per size; execution is safe from several threads.
void forward(std::span<cplx> data);
void backward(std::span<cplx> data);

}  // namespace ilw::fft
