#pragma once

#include "laplab/potential_theory.hpp"

#include <cstdint>
#include <random>

namespace laplab {

// Weak-solution diagnostics: the Psi field of a measure in an external
// field, its zero-gradient frontier, and circle-seeded DLA growth steps
// driven by the Cauchy transform.

// C_mu(z) = sum_k w_k / (z - zeta_k); throws within 1e-12 of an atom.
cplx cauchy_transform(const DiscreteMeasure& mu, cplx z);

struct GridSpec {
    double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0;
    std::size_t nx = 128, ny = 128;
};

struct PsiField {
    ExternalField V;                 // V(z), real
    std::function<cplx(cplx)> dV;    // V'(z) of the boundary equation V' + C_mu = 0
                                     // (2 dV/dz; for V = -|z|^2/2 this is -conj(z))
    DiscreteMeasure mu;
    GridSpec grid;
};

struct PsiValue {
    double value;    // Psi, or log Psi when log_scale is set
    bool log_scale;  // |log Psi| > 300 overflow guard
};

// Psi = exp(V(z) + sum_k w_k log|z - zeta_k|)
PsiValue psi_eval(const PsiField& field, cplx z);

// V'(z) + C_mu(z); equals the (dx - i dy) derivative of log Psi.
cplx psi_gradient(const PsiField& field, cplx z);

struct GrowthFrontier {
    std::vector<std::vector<cplx>> components;  // polylines
    std::vector<bool> closed;
    std::size_t rejected = 0;  // crossings failing the residual filter
};

// Marching-squares zero set of Re psi_gradient on the grid, filtered to
// vertices with |psi_gradient| <= tol (which removes branches where the
// imaginary part stays away from zero).
GrowthFrontier weak_boundary(const PsiField& field, double tol);

struct DLAStepResult {
    DiscreteMeasure mu;      // input measure plus the arrival increment
    std::size_t arrived = 0;
    std::size_t dropped = 0; // tracers that exhausted the step budget
};

// Seeds m tracers uniformly on |z| = R and advects each at unit speed
// along -conj(C_mu)/|C_mu| until it enters the 1e-3 tube around supp mu;
// arrivals carry equal weights summing exactly to dt.
DLAStepResult deterministic_dla_step(const DiscreteMeasure& mu, double R, double dt,
                                     std::size_t m = 1024);

// Same advection with Gaussian increments of st.dev. noise*sqrt(ds) per
// substep; noise = 0 bypasses the generator and reproduces the
// deterministic step exactly.
DLAStepResult ito_dla_step(const DiscreteMeasure& mu, double R, double dt, double noise,
                           std::mt19937_64& rng, std::size_t m = 1024);

} // namespace laplab
