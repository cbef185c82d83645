#pragma once

#include "laplab/polymap.hpp"

#include <stdexcept>
#include <vector>

namespace laplab {

// Spectral integrator for the conformal Dielectric Breakdown flow
//   df/dt = z f'(z) S[(|f'|^2 + sigma^2)^(-alpha/2)](z)
// where S is the analytic Herglotz extension of boundary data, taken
// on the side of the circle matching the map's orientation.
struct DBMConfig {
    double alpha = 2.0;
    double sigma = 0.0;
    std::size_t M = 256;       // boundary modes, power of two
    double dt = 1e-3;
    double t_end = 1.0;
    double curvature_cap = 1e4;
    double tail_guard = 1e-10; // spectral-accuracy guard on the coefficient tail
    double snapshot_every = 0.0; // 0 = keep only endpoints

    void validate() const;
};

struct DBMState {
    PolyMap map;  // coefficients truncated at M/2-1
    double t = 0.0;
};

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Analytic extension S(z) = u_hat_0 + 2 sum_{k>=1} u_hat_k z^k with
// Re S = u on the unit circle. Coefficients returned for z^0..z^{M/2-1}.
std::vector<cplx> herglotz_extend(const std::vector<double>& u, std::size_t M);

// Coefficient velocity of the flow for the current state. Coefficients
// follow the PolyMap layout of the given orientation.
std::vector<cplx> dbm_rhs(const std::vector<cplx>& coeffs, const DBMConfig& cfg,
                          Orientation ori = Orientation::interior);

struct DBMTrajectory {
    std::vector<DBMState> snapshots;
    bool hit_singularity = false;
};

// Classical RK4 with dt-halving when the coefficient tail or the
// curvature cap trips; stops at t_end or when min|f'| < 1e-6.
DBMTrajectory dbm_evolve(const PolyMap& init, const DBMConfig& cfg);

// Max relative drift of C_1..C_m over the snapshots versus the first one.
double moment_drift(const DBMTrajectory& traj, int m);

// Boundary curvature of f(e^{i theta}) sampled at M nodes.
std::vector<double> boundary_curvature(const PolyMap& map, std::size_t M);
double curvature_variance(const PolyMap& map, std::size_t M = 256);

// Advance coefficients by one explicit Euler substep of the Herglotz
// normal-velocity flow with boundary data u (shared with block_dla).
std::vector<cplx> herglotz_euler_step(const std::vector<cplx>& coeffs,
                                      const std::vector<double>& u, double dt,
                                      double tail_guard = 1e-6);

} // namespace laplab
