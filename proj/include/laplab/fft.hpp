#pragma once

#include <complex>
#include <vector>

namespace laplab {

using cplx = std::complex<double>;

// In-place iterative radix-2 FFT. Size must be a power of two.
void fft(std::vector<cplx>& a, bool inverse = false);

// Forward transform of real samples u_j, j = 0..M-1, returning
// hat{u}_k = (1/M) sum_j u_j e^{-ik theta_j}.
std::vector<cplx> fft_coeffs(const std::vector<double>& u);

// Evaluate sum_k c_k w^k at the M-th roots of unity (c padded/truncated to M).
std::vector<cplx> eval_on_circle(const std::vector<cplx>& c, std::size_t M);

bool is_pow2(std::size_t n);

} // namespace laplab
