#pragma once

#include "laplab/polymap.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace laplab {

// Logarithmic potential theory kit: discrete energies, Fekete points,
// transfinite diameter, weighted equilibrium measures on the line, and
// orthogonal-polynomial cross-checks.

struct DiscreteMeasure {
    std::vector<cplx> points;
    std::vector<double> weights;

    double mass() const;
    static DiscreteMeasure atoms(std::vector<cplx> pts, double w = 1.0);
};

using ExternalField = std::function<double(cplx)>;

// W = -sum_{i != j} w_i w_j log|z_i - z_j| (ordered pairs, so each
// unordered pair counts twice). Coincident points give +inf.
double log_energy(const DiscreteMeasure& mu);

// E = W + 2 sum_k w_k V(z_k)
double total_energy(const DiscreteMeasure& mu, const ExternalField& V);

// U(z) = V(z) - sum_k w_k log|z - z_k|
double total_potential(const DiscreteMeasure& mu, const ExternalField& V, cplx z);

struct FeketeResult {
    std::vector<cplx> points;
    double log_delta;  // log prod_{k<j} |z_k - z_j|
    double delta() const;
};

// Maximizes prod_{k<j} |z_k - z_j| over an n-subset of the candidate
// cloud by single-point exchange ascent.
FeketeResult fekete_points(const std::vector<cplx>& cloud, std::size_t n,
                           std::uint64_t seed = 0);

struct TransfiniteReport {
    std::vector<double> d_n;  // d_n = Delta_n^{2/(n(n-1))}, index i holds n = i+2
    double cap;               // extrapolated limit
    bool monotone;            // false warns of cloud under-resolution
};

TransfiniteReport transfinite_diameter(const std::vector<cplx>& cloud, std::size_t n_max);

// Conformal modulus 2 pi / log R of the annulus 1 < |w| < R.
double condenser_capacity_annulus(double R);

struct Equilibrium1DConfig {
    double t = 1.0;             // total mass, atoms weigh t/n
    std::size_t n = 200;
    std::size_t max_iters = 30000;
    double grad_tol = 1e-8;
    double init_halfwidth = 0.0;  // 0 = sqrt(t)/2 heuristic
    bool constrained = false;     // restrict support to [lo, hi] (Robin mode)
    double lo = -1.0, hi = 1.0;
};

struct Equilibrium1DResult {
    std::vector<double> x;      // sorted atom positions
    double w = 0.0;             // weight per atom, t/n
    double energy = 0.0;        // discrete total energy
    double u_t = 0.0;           // (E - int V dmu) / t
    double grad_residual = 0.0;
    bool converged = false;
    double support_lo = 0.0;    // extreme atom corrected by the edge gap
    double support_hi = 0.0;
};

// Minimizes the discrete weighted energy over atom positions by damped
// gradient descent with backtracking line search.
Equilibrium1DResult equilibrium_measure_1d(const std::function<double(double)>& V,
                                           const std::function<double(double)>& Vp,
                                           const Equilibrium1DConfig& cfg);

DiscreteMeasure to_measure(const Equilibrium1DResult& eq);

struct OrthoPolyResult {
    std::vector<double> alpha;            // Jacobi diagonal, size n_max
    std::vector<double> beta;             // ||p_k||^2 / ||p_{k-1}||^2, beta[0] = mu_0
    std::vector<double> norms;            // ||Q_n|| for n = 0..n_max
    std::vector<std::vector<double>> zeros;  // zeros of Q_n, n = 1..n_max
};

// Monic orthogonal polynomials for the weight e^{-2 N V(x)} dx via the
// Stieltjes procedure on composite Gauss panels; zeros from the
// symmetric tridiagonal Jacobi matrix.
OrthoPolyResult orthopoly_realline(const std::function<double(double)>& V, double N,
                                   std::size_t n_max);

struct HeineResult {
    std::vector<double> coeffs;  // monic Q_n: coefficient of x^0 .. x^{n-1}
    std::vector<double> se;      // batch-mean standard errors
    double rhat = 0.0;           // max split-chain R-hat over coefficients
    double acceptance = 0.0;
    bool converged = false;      // rhat <= 1.1
};

// Monte Carlo Heine formula: averages prod_k (x - zeta_k) over the
// n-point ensemble with density exp(sum_{i<j} 2 log|z_i-z_j| - 2N sum V).
HeineResult heine_average(const std::function<double(double)>& V, double N, std::size_t n,
                          std::size_t samples, std::uint64_t seed);

} // namespace laplab
