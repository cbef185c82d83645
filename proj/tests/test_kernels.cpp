#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laplab/kernels.hpp"

#include <random>
#include <vector>

using laplab::kernels::cplx;
namespace K = laplab::kernels;

namespace {

std::vector<cplx> random_points(std::size_t n, unsigned seed, double scale = 2.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, scale);
    std::vector<cplx> p(n);
    for (auto& z : p) z = {g(rng), g(rng)};
    return p;
}

std::vector<double> random_weights(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.5);
    std::vector<double> w(n);
    for (auto& x : w) x = u(rng);
    return w;
}

} // namespace

TEST_CASE("dispatched kernels match scalar reference") {
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 257u, 1000u}) {
        auto pts = random_points(n, unsigned(1234 + n));
        auto w = random_weights(n, unsigned(99 + n));
        const cplx z{3.7, -1.2};

        CHECK(K::log_abs_sum(pts, z) ==
              doctest::Approx(K::scalar::log_abs_sum(pts, z)).epsilon(1e-12));
        CHECK(K::weighted_log_abs_sum(pts, w, z) ==
              doctest::Approx(K::scalar::weighted_log_abs_sum(pts, w, z)).epsilon(1e-12));
        CHECK(K::pairwise_log_abs_sum(pts) ==
              doctest::Approx(K::scalar::pairwise_log_abs_sum(pts)).epsilon(1e-12));
        CHECK(K::pairwise_weighted_log_abs_sum(pts, w) ==
              doctest::Approx(K::scalar::pairwise_weighted_log_abs_sum(pts, w)).epsilon(1e-12));

        const cplx c1 = K::cauchy_sum(pts, w, z);
        const cplx c2 = K::scalar::cauchy_sum(pts, w, z);
        CHECK(std::abs(c1 - c2) <= 1e-12 * (1.0 + std::abs(c2)));

        std::vector<double> x(n);
        std::mt19937_64 rng(unsigned(7 + n));
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (auto& v : x) v = u(rng);
        CHECK(K::pairwise_log_abs_sum_1d(x) ==
              doctest::Approx(K::scalar::pairwise_log_abs_sum_1d(x)).epsilon(1e-12));

        std::vector<double> g1(n), g2(n);
        K::pairwise_recip_gradient(x, g1);
        K::scalar::pairwise_recip_gradient(x, g2);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-11));
    }
}

TEST_CASE("kernel values against direct formulas") {
    std::vector<cplx> pts = {{0.0, 0.0}, {1.0, 0.0}};
    std::vector<double> w = {0.5, 0.5};
    const cplx z{2.0, 0.0};
    // 0.5/2 + 0.5/1
    CHECK(K::cauchy_sum(pts, w, z).real() == doctest::Approx(0.75));
    CHECK(K::cauchy_sum(pts, w, z).imag() == doctest::Approx(0.0));
    // log 2 + log 1
    CHECK(K::log_abs_sum(pts, z) == doctest::Approx(std::log(2.0)));
    // only pair: log|0-1| = 0
    CHECK(K::pairwise_log_abs_sum(pts) == doctest::Approx(0.0));
}

TEST_CASE("product-trick log survives extreme distances") {
    // Distances spanning many orders of magnitude must not overflow the
    // lane products.
    std::vector<cplx> pts;
    for (int k = 0; k < 64; ++k) pts.push_back({std::pow(10.0, (k % 40) - 20), 0.0});
    const cplx z{0.0, 0.0};
    CHECK(K::log_abs_sum(pts, z) ==
          doctest::Approx(K::scalar::log_abs_sum(pts, z)).epsilon(1e-12));
}

TEST_CASE("backend name is reported") {
    CHECK((K::backend() == "avx2" || K::backend() == "scalar"));
}
