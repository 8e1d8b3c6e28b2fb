#pragma once

#include <complex>
#include <vector>

namespace evomsn {

// In-place forward DFT. Handles any length: power-of-two sizes run the
// iterative radix-2 path, everything else goes through Bluestein's chirp-z
// reduction to a padded power-of-two convolution.
void fft(std::vector<std::complex<double>>& buf);

// Convenience wrapper for a real-valued signal; returns the full complex
// spectrum of the same length.
std::vector<std::complex<double>> fft_real(const std::vector<double>& signal);

}  // namespace evomsn
