#pragma once

#include <span>

#include "shc/types.hpp"

namespace shc::fft {

// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N).
ComplexVec forward(std::span<const Complex> x);

// Inverse DFT including the 1/N factor, so inverse(forward(x)) == x.
ComplexVec inverse(std::span<const Complex> X);

// In-place variants; buffer length selects the transform size.
void forward_inplace(ComplexVec& x);
void inverse_inplace(ComplexVec& x);

// Frequency (Hz) of DFT bin k for an N-point transform at the given rate,
// mapped to [-fs/2, fs/2).
double bin_frequency(std::size_t k, std::size_t n, double sample_rate);

}  // namespace shc::fft
