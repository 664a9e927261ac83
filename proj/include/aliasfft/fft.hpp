#pragma once

#include <complex>
#include <span>
#include <vector>

namespace aliasfft {

/// Unnormalized forward DFT, out[i] = Σ_j in[j]·exp(-2πi·ij/n), for any n ≥ 1.
/// Power-of-two sizes go through an iterative radix-2 kernel, everything else
/// through Bluestein's chirp-z reduction to a power-of-two convolution.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> in);

/// Unnormalized inverse (positive exponent).
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> in);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace aliasfft
