#pragma once

#include "laplab/polymap.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace laplab {

// Stochastic block-deposition growth on conformal boundary segments.
// Each step drops K equal-area blocks onto N segments and refits the
// map with one Euler substep of the Herglotz normal-velocity flow.
struct BlockModelConfig {
    std::size_t N = 64;          // boundary segments
    std::size_t K = 64;          // blocks per step
    double epsilon = 1e-3;       // area of one block
    std::size_t steps = 100;
    std::uint64_t seed = 0;
    std::size_t M = 256;         // refit modes, power of two
    double tail_guard = 1e-3;    // piecewise-constant forcing is not spectrally smooth
    bool length_weighted = false; // landing p_i proportional to l_i instead of 1/N

    double kappa() const { return double(K) / double(N); }
    void validate() const;
};

struct OccupationStep {
    std::vector<std::uint64_t> k;  // occupation numbers, sum exactly K
    std::vector<double> l;         // segment lengths
    std::vector<double> h;         // block heights epsilon / l_i
    std::vector<double> dn;        // displacements epsilon k_i / l_i
};

// l_i = (2 pi / N) |f'(e^{i phi_i})| at midpoints phi_i = (i + 1/2) 2 pi / N.
std::vector<double> segment_lengths(const PolyMap& map, std::size_t N);

// (k_1..k_N) ~ Multinomial(K; p) by sequential binomial conditioning,
// p uniform or proportional to the segment lengths.
OccupationStep sample_occupation(const std::vector<double>& lengths, std::size_t K,
                                 double epsilon, std::mt19937_64& rng,
                                 bool length_weighted = false);

// One deposition step: normal advance by the piecewise-constant field
// dn_i, refit through the Herglotz flow, coefficients capped at M/2-1.
PolyMap apply_step(const PolyMap& map, const OccupationStep& occ, std::size_t M,
                   double tail_guard = 1e-3);

struct BlockTrajectory {
    std::vector<PolyMap> snapshots;          // after each step, index 0 = init
    std::vector<double> area;                // quadrature area per snapshot
    std::vector<double> min_fprime;
    std::vector<std::uint64_t> k_counts;     // pooled histogram of occupation numbers
    std::uint64_t total_draws = 0;           // segments times completed steps
    bool hit_singularity = false;
};

BlockTrajectory run_aggregation(const BlockModelConfig& cfg, const PolyMap& init);

// Replica seed stream (splitmix64 of master ^ index), so ensemble
// members are reproducible and independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace laplab
