#include "laplab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace laplab {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= double(n);
}

std::vector<cplx> fft_coeffs(const std::vector<double>& u) {
    std::vector<cplx> a(u.begin(), u.end());
    fft(a);
    for (auto& x : a) x /= double(u.size());
    return a;
}

std::vector<cplx> eval_on_circle(const std::vector<cplx>& c, std::size_t M) {
    if (!is_pow2(M)) throw std::invalid_argument("eval_on_circle: M must be a power of two");
    std::vector<cplx> a(M, cplx(0.0));
    for (std::size_t k = 0; k < c.size(); ++k) a[k % M] += c[k];
    fft(a, /*inverse=*/true);
    for (auto& x : a) x *= double(M);
    return a;
}

} // namespace laplab
