#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>

// Hot inner loops shared by the potential-theory, weak-solution and
// eigenvalue-ensemble modules. Each kernel has a scalar reference
// implementation and (on x86-64 with AVX2) a vectorized variant; the
// public entry points dispatch once at startup based on cpuid.

namespace laplab::kernels {

using cplx = std::complex<double>;

// sum_k w_k * log|z - p_k|
double weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w, cplx z);

// sum_k log|z - p_k| (unit weights)
double log_abs_sum(std::span<const cplx> pts, cplx z);

// sum_{i<j} log|p_i - p_j|
double pairwise_log_abs_sum(std::span<const cplx> pts);

// sum_{i<j} w_i w_j log|p_i - p_j|
double pairwise_weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w);

// sum_k w_k / (z - p_k)
cplx cauchy_sum(std::span<const cplx> pts, std::span<const double> w, cplx z);

// out[i] = sum_{j != i} 1/(x_i - x_j), for points on the real line
void pairwise_recip_gradient(std::span<const double> x, std::span<double> out);

// sum_{i<j} log|x_i - x_j| for points on the real line
double pairwise_log_abs_sum_1d(std::span<const double> x);

// Name of the active backend ("scalar" or "avx2").
const std::string& backend();

// Scalar reference implementations, kept callable for equivalence tests.
namespace scalar {
double weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w, cplx z);
double log_abs_sum(std::span<const cplx> pts, cplx z);
double pairwise_log_abs_sum(std::span<const cplx> pts);
double pairwise_weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w);
cplx cauchy_sum(std::span<const cplx> pts, std::span<const double> w, cplx z);
void pairwise_recip_gradient(std::span<const double> x, std::span<double> out);
double pairwise_log_abs_sum_1d(std::span<const double> x);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w, cplx z);
double log_abs_sum(std::span<const cplx> pts, cplx z);
double pairwise_log_abs_sum(std::span<const cplx> pts);
double pairwise_weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w);
cplx cauchy_sum(std::span<const cplx> pts, std::span<const double> w, cplx z);
void pairwise_recip_gradient(std::span<const double> x, std::span<double> out);
double pairwise_log_abs_sum_1d(std::span<const double> x);
} // namespace avx2
#endif

} // namespace laplab::kernels
