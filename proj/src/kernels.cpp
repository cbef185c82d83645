#include "laplab/kernels.hpp"

#include <cmath>

namespace laplab::kernels {

namespace scalar {

double weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w, cplx z) {
    double s = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) s += w[k] * std::log(std::abs(z - pts[k]));
    return s;
}

double log_abs_sum(std::span<const cplx> pts, cplx z) {
    double s = 0.0;
    for (const auto& p : pts) s += std::log(std::abs(z - p));
    return s;
}

double pairwise_log_abs_sum(std::span<const cplx> pts) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += log_abs_sum(pts.subspan(i + 1), pts[i]);
    return s;
}

double pairwise_weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += w[i] * weighted_log_abs_sum(pts.subspan(i + 1), w.subspan(i + 1), pts[i]);
    return s;
}

cplx cauchy_sum(std::span<const cplx> pts, std::span<const double> w, cplx z) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double dx = z.real() - pts[k].real();
        const double dy = z.imag() - pts[k].imag();
        const double inv = w[k] / (dx * dx + dy * dy);
        re += dx * inv;
        im -= dy * inv;
    }
    return {re, im};
}

void pairwise_recip_gradient(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            s += 1.0 / (x[i] - x[j]);
        }
        out[i] = s;
    }
}

double pairwise_log_abs_sum_1d(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) s += std::log(std::abs(x[i] - x[j]));
    return s;
}

} // namespace scalar

namespace {

struct Backend {
    std::string name;
    double (*weighted_log_abs_sum)(std::span<const cplx>, std::span<const double>, cplx);
    double (*log_abs_sum)(std::span<const cplx>, cplx);
    double (*pairwise_log_abs_sum)(std::span<const cplx>);
    double (*pairwise_weighted_log_abs_sum)(std::span<const cplx>, std::span<const double>);
    cplx (*cauchy_sum)(std::span<const cplx>, std::span<const double>, cplx);
    void (*pairwise_recip_gradient)(std::span<const double>, std::span<double>);
    double (*pairwise_log_abs_sum_1d)(std::span<const double>);
};

Backend pick_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
        return {"avx2",
                avx2::weighted_log_abs_sum,
                avx2::log_abs_sum,
                avx2::pairwise_log_abs_sum,
                avx2::pairwise_weighted_log_abs_sum,
                avx2::cauchy_sum,
                avx2::pairwise_recip_gradient,
                avx2::pairwise_log_abs_sum_1d};
    }
#endif
    return {"scalar",
            scalar::weighted_log_abs_sum,
            scalar::log_abs_sum,
            scalar::pairwise_log_abs_sum,
            scalar::pairwise_weighted_log_abs_sum,
            scalar::cauchy_sum,
            scalar::pairwise_recip_gradient,
            scalar::pairwise_log_abs_sum_1d};
}

const Backend& active() {
    static const Backend b = pick_backend();
    return b;
}

} // namespace

const std::string& backend() { return active().name; }

double weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w, cplx z) {
    return active().weighted_log_abs_sum(pts, w, z);
}
double log_abs_sum(std::span<const cplx> pts, cplx z) { return active().log_abs_sum(pts, z); }
double pairwise_log_abs_sum(std::span<const cplx> pts) { return active().pairwise_log_abs_sum(pts); }
double pairwise_weighted_log_abs_sum(std::span<const cplx> pts, std::span<const double> w) {
    return active().pairwise_weighted_log_abs_sum(pts, w);
}
cplx cauchy_sum(std::span<const cplx> pts, std::span<const double> w, cplx z) {
    return active().cauchy_sum(pts, w, z);
}
void pairwise_recip_gradient(std::span<const double> x, std::span<double> out) {
    active().pairwise_recip_gradient(x, out);
}
double pairwise_log_abs_sum_1d(std::span<const double> x) {
    return active().pairwise_log_abs_sum_1d(x);
}

} // namespace laplab::kernels
