#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sonar {

using cplx = std::complex<double>;

/// In-place forward DFT of arbitrary length (radix-2 when N is a power of
/// two, Bluestein otherwise). Unnormalized: X[k] = sum_n x[n] e^{-2pi i nk/N}.
void fft(std::vector<cplx>& x);

/// In-place inverse DFT (includes the 1/N factor).
void ifft(std::vector<cplx>& x);

/// Forward DFT of a real signal; returns all N complex bins.
std::vector<cplx> fft_real(const std::vector<double>& x);

/// Real part of the inverse DFT (for spectra known to be conjugate-symmetric).
std::vector<double> ifft_to_real(std::vector<cplx> spectrum);

/// Textbook O(N^2) DFT. Test oracle; do not use on large inputs.
std::vector<cplx> dft_naive(const std::vector<cplx>& x);

}  // namespace sonar
