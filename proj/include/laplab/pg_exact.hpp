#pragma once

#include "laplab/polymap.hpp"

#include <vector>

namespace laplab {

// Exact moment-conserving Laplacian Growth evolution for low-degree
// polynomial maps with real coefficients. Area advances linearly at
// `rate`; C_1..C_{d-1} are held at their initial values by a Newton
// solve on the coefficient vector.
struct PGState {
    PolyMap map;        // interior, degree <= 3, real coefficients
    double t = 0.0;
    double rate = 0.0;  // dA/dt, +2pi injection / -2pi suction
    double area0 = 0.0;
    std::vector<double> conserved;  // C_1..C_{d-1} at t = 0
};

struct NonConvergenceError : std::runtime_error {
    double residual;
    NonConvergenceError(const std::string& msg, double r)
        : std::runtime_error(msg), residual(r) {}
};
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PGState make_pg_state(const PolyMap& map, double rate);

// One exact step: solve {area = A0 + rate*(t+dt), C_k = C_k(0)} by Newton
// seeded at the current coefficients.
PGState pg_step(const PGState& state, double dt);

// Degree-2 suction cusp time, by root-finding the system
// {a = 2b, a^2 b = C_1(0), pi(a^2 + 2b^2) = A0 - 2pi t_c}.
// Injection returns +infinity. b0 = 0 returns the exhaustion time A0/2pi
// with `exhaustion` set.
struct CuspReport {
    double t_c;
    bool exhaustion = false;
};
CuspReport cusp_time(const PGState& state);

// max_theta |Im(conj(f_t) f_theta) - sign| with f_t from the centered
// difference of the coefficient trajectory at t (steps +/- dt).
double verify_pg_identity(const PGState& state, double dt, std::size_t M);

struct PGTrajectory {
    std::vector<PGState> states;
    std::vector<double> min_fprime;
};

// Run until t_end or singularity (min|f'| < 1e-6), halving the step when
// Newton stalls near the cusp.
PGTrajectory pg_run(const PGState& init, double t_end, double dt);

// CSV: t, a_1..a_d, area, C_1..C_{d-1}, min|f'|
std::string pg_trajectory_csv(const PGTrajectory& traj);

} // namespace laplab
