#include "laplab/block_dla.hpp"

#include "laplab/dbm_flow.hpp"
#include "laplab/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace laplab {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

void BlockModelConfig::validate() const {
    if (N < 8) throw std::invalid_argument("BlockModelConfig: N must be >= 8");
    if (K < 1) throw std::invalid_argument("BlockModelConfig: K must be >= 1");
    if (epsilon <= 0.0) throw std::invalid_argument("BlockModelConfig: epsilon must be positive");
    if (steps < 1) throw std::invalid_argument("BlockModelConfig: steps must be >= 1");
    if (!is_pow2(M) || M < 2 * N) throw std::invalid_argument("BlockModelConfig: M must be a power of two >= 2N");
}

std::vector<double> segment_lengths(const PolyMap& map, std::size_t N) {
    std::vector<double> l(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double phi = (double(i) + 0.5) * 2.0 * pi / double(N);
        l[i] = 2.0 * pi / double(N) * std::abs(evaluate_deriv(map, std::polar(1.0, phi)));
    }
    return l;
}

OccupationStep sample_occupation(const std::vector<double>& lengths, std::size_t K,
                                 double epsilon, std::mt19937_64& rng,
                                 bool length_weighted) {
    const std::size_t N = lengths.size();
    OccupationStep occ;
    occ.l = lengths;
    occ.k.resize(N);
    occ.h.resize(N);
    occ.dn.resize(N);
    std::vector<double> p(N, 1.0 / double(N));
    if (length_weighted) {
        double total = 0.0;
        for (double v : lengths) total += v;
        for (std::size_t i = 0; i < N; ++i) p[i] = lengths[i] / total;
    }
    std::uint64_t left = K;
    double mass = 1.0;
    for (std::size_t i = 0; i < N && left > 0; ++i) {
        if (i + 1 == N) {
            occ.k[i] = left;
            left = 0;
            break;
        }
        const double q = std::clamp(p[i] / mass, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> bin(left, q);
        occ.k[i] = bin(rng);
        left -= occ.k[i];
        mass -= p[i];
    }
    for (std::size_t i = 0; i < N; ++i) {
        occ.h[i] = epsilon / lengths[i];
        occ.dn[i] = epsilon * double(occ.k[i]) / lengths[i];
    }
    return occ;
}

PolyMap apply_step(const PolyMap& map, const OccupationStep& occ, std::size_t M,
                   double tail_guard) {
    if (map.orientation != Orientation::interior)
        throw std::invalid_argument("apply_step: interior maps only");
    const std::size_t N = occ.dn.size();
    if (M < 2 * N || !is_pow2(M)) throw std::invalid_argument("apply_step: M must be a power of two >= 2N");
    const std::size_t D = M / 2 - 1;
    if (map.coeffs.size() > D) throw ResolutionError("resolution exceeded: map degree >= M/2");
    std::vector<cplx> a(D, cplx(0.0));
    std::copy(map.coeffs.begin(), map.coeffs.end(), a.begin());

    std::vector<double> u(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double th = 2.0 * pi * double(j) / double(M);
        const std::size_t seg = std::min<std::size_t>(N - 1, std::size_t(th * double(N) / (2.0 * pi)));
        const cplx fp = evaluate_deriv(map, std::polar(1.0, th));
        u[j] = occ.dn[seg] / std::abs(fp);
    }
    a = herglotz_euler_step(a, u, 1.0, tail_guard);
    double mx = 0.0;
    for (const auto& v : a) mx = std::max(mx, std::abs(v));
    while (a.size() > 1 && std::abs(a.back()) < 1e-13 * std::max(1.0, mx)) a.pop_back();
    return PolyMap::interior(std::move(a));
}

BlockTrajectory run_aggregation(const BlockModelConfig& cfg, const PolyMap& init) {
    cfg.validate();
    if (init.orientation != Orientation::interior)
        throw std::invalid_argument("run_aggregation: interior maps only");
    if (!is_regular(init)) throw std::invalid_argument("run_aggregation: initial map not regular");

    std::mt19937_64 rng(cfg.seed);
    BlockTrajectory traj;
    traj.snapshots.push_back(init);
    traj.area.push_back(area_boundary_quadrature(init, cfg.M));
    traj.min_fprime.push_back(min_deriv_on_circle(init));

    PolyMap cur = init;
    for (std::size_t s = 0; s < cfg.steps; ++s) {
        const auto l = segment_lengths(cur, cfg.N);
        const auto occ = sample_occupation(l, cfg.K, cfg.epsilon, rng, cfg.length_weighted);
        for (std::uint64_t k : occ.k) {
            if (k >= traj.k_counts.size()) traj.k_counts.resize(k + 1, 0);
            ++traj.k_counts[k];
        }
        traj.total_draws += cfg.N;
        cur = apply_step(cur, occ, cfg.M, cfg.tail_guard);
        const double mn = min_deriv_on_circle(cur);
        traj.snapshots.push_back(cur);
        traj.area.push_back(area_boundary_quadrature(cur, cfg.M));
        traj.min_fprime.push_back(mn);
        if (mn < 1e-6) {
            traj.hit_singularity = true;
            break;
        }
    }
    return traj;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master ^ (index + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace laplab
