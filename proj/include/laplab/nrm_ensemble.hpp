#pragma once

#include "laplab/polymap.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace laplab {

// Metropolis sampling of the normal-matrix eigenvalue ensemble, droplet
// density diagnostics, and planar orthogonal polynomials.

// V(z) = (1/t0)(|z|^2 - Q(z) - conj(Q(z))), Q(z) = sum_k t_k z^k, k >= 2.
struct NRMPotential {
    double t0 = 1.0;
    std::vector<double> t_k;  // t_k[i] multiplies z^{i+2}

    double operator()(cplx z) const;
};

// Validates t0 > 0 and probes integrability of |z|^n e^{-NV} on a ray grid
// (with the polynomial factor allowance for n <= 2 * probe_n_max); throws
// std::invalid_argument for confining failures.
NRMPotential nrm_potential(double t0, std::vector<double> t_k, std::size_t probe_n_max = 64);

// sum_{i<j} 2 log|z_i - z_j| - N sum_j V(z_j); -inf for coincident points.
double log_density(std::span<const cplx> points, const NRMPotential& V, double N);

struct ChainConfig {
    std::size_t n = 32;       // eigenvalue count
    std::size_t N = 32;       // inverse temperature scale, n <= N
    std::size_t sweeps = 4000;
    std::size_t thin = 10;    // record every thin-th sweep after burn-in
    std::uint64_t seed = 1;

    void validate() const;
};

struct EigenSample {
    std::vector<cplx> points;
    double logweight;
};

struct ChainResult {
    std::vector<EigenSample> samples;
    double acceptance;  // post burn-in acceptance rate
    double step;        // final proposal st.dev.
    std::uint64_t seed;
    std::size_t sweeps;
};

// Single-eigenvalue Gaussian proposals; the step adapts toward ~35 percent
// acceptance during the first half (burn-in) and is frozen afterwards.
ChainResult metropolis_sample(const NRMPotential& V, const ChainConfig& cfg);

struct HistGrid {
    double x0 = -1.5, x1 = 1.5, y0 = -1.5, y1 = 1.5;
    std::size_t nx = 12, ny = 12;
};

struct DensityField {
    HistGrid grid;
    std::vector<double> rho;  // row-major nx * ny, normalized density
    double mass;              // integral over the grid, = n/N up to clipping
};

// Histogram estimate of the eigenvalue density, scaled so the full-plane
// integral is n/N; points outside the grid are dropped (reducing mass).
DensityField density_histogram(const std::vector<EigenSample>& samples, const HistGrid& grid,
                               double N);

struct PlanarOrthoResult {
    std::vector<double> norms;   // ||P_n|| of the monic orthogonal polynomials
    double gram_offdiag;         // max normalized off-diagonal Gram entry
    std::vector<double> radii;
    std::vector<std::vector<double>> mu_radial;  // angular mean of |P_n|^2 e^{-NV}
};

// Gram-Schmidt on monomials against the planar weight e^{-NV}; throws on
// Gram ill-conditioning past n_max.
PlanarOrthoResult planar_orthopoly(const NRMPotential& V, double N, std::size_t n_max);

} // namespace laplab
