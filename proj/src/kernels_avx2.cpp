#if defined(__x86_64__) || defined(_M_X64)

#include "laplab/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 variants. Complex arithmetic (distances, reciprocals) is done in
// 4-wide double vectors; logarithms are amortized by accumulating the
// product of squared distances per lane and flushing it through a scalar
// log whenever a factor leaves the safe exponent range.

namespace laplab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Deinterleave 4 complex values (re,im pairs) into separate registers.
inline void load4(const cplx* p, __m256d& re, __m256d& im) {
    __m256d a = _mm256_loadu_pd(reinterpret_cast<const double*>(p));
    __m256d b = _mm256_loadu_pd(reinterpret_cast<const double*>(p + 2));
    re = _mm256_unpacklo_pd(a, b); // re0 re2 re1 re3
    im = _mm256_unpackhi_pd(a, b); // im0 im2 im1 im3
}

// Weights permuted to match the lane order produced by load4.
inline __m256d load4w(const double* w) {
    __m256d v = _mm256_loadu_pd(w);
    return _mm256_permute4x64_pd(v, _MM_SHUFFLE(3, 1, 2, 0));
}

const __m256d kLo = _mm256_set1_pd(1e-60);
const __m256d kHi = _mm256_set1_pd(1e60);

// Running product of squared distances with overflow-guarded flushes.
struct LogProd {
    __m256d prod = _mm256_set1_pd(1.0);
    double sum = 0.0;
    int pending = 0;

    inline void flush() {
        alignas(32) double lane[4];
        _mm256_store_pd(lane, prod);
        sum += std::log(lane[0] * lane[1]) + std::log(lane[2] * lane[3]);
        prod = _mm256_set1_pd(1.0);
        pending = 0;
    }
    inline void push(__m256d d2) {
        __m256d bad = _mm256_or_pd(_mm256_cmp_pd(d2, kLo, _CMP_LT_OQ),
                                   _mm256_cmp_pd(d2, kHi, _CMP_GT_OQ));
        if (_mm256_movemask_pd(bad)) {
            alignas(32) double lane[4];
            _mm256_store_pd(lane, d2);
            for (double v : lane) sum += std::log(v);
            return;
        }
        prod = _mm256_mul_pd(prod, d2);
        if (++pending == 8) flush();
    }
    // Total of 0.5*log(d2) contributions.
    inline double half_log_total() {
        if (pending) flush();
        return 0.5 * sum;
    }
};

} // namespace

double log_abs_sum(std::span<const cplx> pts, cplx z) {
    const std::size_t n = pts.size();
    const __m256d zx = _mm256_set1_pd(z.real());
    const __m256d zy = _mm256_set1_pd(z.imag());
    LogProd acc;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d re, im;
        load4(pts.data() + k, re, im);
        __m256d dx = _mm256_sub_pd(zx, re);
        __m256d dy = _mm256_sub_pd(zy, im);
        acc.push(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    }
    double s = acc.half_log_total();
    for (; k < n; ++k) s += std::log(std::abs(z - pts[k]));
    return s;
}

double weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w, cplx z) {
    // Weighted logs cannot use the product trick; vectorize the distance
    // computation and take scalar logs lane by lane.
    const std::size_t n = pts.size();
    const __m256d zx = _mm256_set1_pd(z.real());
    const __m256d zy = _mm256_set1_pd(z.imag());
    double s = 0.0;
    std::size_t k = 0;
    alignas(32) double d2[4], wl[4];
    for (; k + 4 <= n; k += 4) {
        __m256d re, im;
        load4(pts.data() + k, re, im);
        __m256d dx = _mm256_sub_pd(zx, re);
        __m256d dy = _mm256_sub_pd(zy, im);
        _mm256_store_pd(d2, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        _mm256_store_pd(wl, load4w(w.data() + k));
        for (int l = 0; l < 4; ++l) s += 0.5 * wl[l] * std::log(d2[l]);
    }
    for (; k < n; ++k) s += w[k] * std::log(std::abs(z - pts[k]));
    return s;
}

double pairwise_log_abs_sum(std::span<const cplx> pts) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += log_abs_sum(pts.subspan(i + 1), pts[i]);
    return s;
}

double pairwise_weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += w[i] * weighted_log_abs_sum(pts.subspan(i + 1), w.subspan(i + 1), pts[i]);
    return s;
}

cplx cauchy_sum(std::span<const cplx> pts, std::span<const double> w, cplx z) {
    const std::size_t n = pts.size();
    const __m256d zx = _mm256_set1_pd(z.real());
    const __m256d zy = _mm256_set1_pd(z.imag());
    __m256d sre = _mm256_setzero_pd();
    __m256d sim = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d re, im;
        load4(pts.data() + k, re, im);
        __m256d dx = _mm256_sub_pd(zx, re);
        __m256d dy = _mm256_sub_pd(zy, im);
        __m256d den = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        __m256d inv = _mm256_div_pd(load4w(w.data() + k), den);
        sre = _mm256_add_pd(sre, _mm256_mul_pd(dx, inv));
        sim = _mm256_sub_pd(sim, _mm256_mul_pd(dy, inv));
    }
    double re = hsum(sre), im = hsum(sim);
    for (; k < n; ++k) {
        const double dx = z.real() - pts[k].real();
        const double dy = z.imag() - pts[k].imag();
        const double inv = w[k] / (dx * dx + dy * dy);
        re += dx * inv;
        im -= dy * inv;
    }
    return {re, im};
}

namespace {

inline double recip_range(const double* x, std::size_t lo, std::size_t hi, double xi) {
    const __m256d vxi = _mm256_set1_pd(xi);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = lo;
    for (; j + 4 <= hi; j += 4) {
        __m256d d = _mm256_sub_pd(vxi, _mm256_loadu_pd(x + j));
        acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_set1_pd(1.0), d));
    }
    double s = hsum(acc);
    for (; j < hi; ++j) s += 1.0 / (xi - x[j]);
    return s;
}

} // namespace

void pairwise_recip_gradient(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = recip_range(x.data(), 0, i, x[i]) + recip_range(x.data(), i + 1, n, x[i]);
}

double pairwise_log_abs_sum_1d(std::span<const double> x) {
    const std::size_t n = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const __m256d xi = _mm256_set1_pd(x[i]);
        LogProd acc;
        std::size_t j = i + 1;
        for (; j + 4 <= n; j += 4) {
            __m256d d = _mm256_sub_pd(xi, _mm256_loadu_pd(x.data() + j));
            acc.push(_mm256_mul_pd(d, d));
        }
        s += acc.half_log_total();
        for (; j < n; ++j) s += std::log(std::abs(x[i] - x[j]));
    }
    return s;
}

} // namespace laplab::kernels::avx2

#endif
