#include "laplab/nrm_ensemble.hpp"

#include "laplab/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace laplab {

namespace {

constexpr double pi = std::numbers::pi;

}

double NRMPotential::operator()(cplx z) const {
    cplx Q = 0.0;
    for (std::size_t i = t_k.size(); i-- > 0;) Q = (Q + t_k[i]) * z;
    Q *= z;  // Q(z) = sum_i t_k[i] z^{i+2}
    return (std::norm(z) - 2.0 * Q.real()) / t0;
}

NRMPotential nrm_potential(double t0, std::vector<double> t_k, std::size_t probe_n_max) {
    if (!(t0 > 0.0)) throw std::invalid_argument("nrm_potential: t0 must be > 0");
    NRMPotential V{t0, std::move(t_k)};
    // the weight |z|^n e^{-V} must decay along every ray for n up to
    // 2 * probe_n_max
    const double excess = 2.0 * double(probe_n_max + 1);
    for (std::size_t a = 0; a < 64; ++a) {
        const cplx dir = std::polar(1.0, 2.0 * pi * (double(a) + 0.5) / 64.0);
        bool confining = false;
        for (double R = 8.0; R <= 1e4; R *= 2.0)
            if (V(R * dir) - excess * std::log(R) > 0.0) {
                confining = true;
                break;
            }
        if (!confining)
            throw std::invalid_argument("nrm_potential: weight is not integrable");
    }
    return V;
}

double log_density(std::span<const cplx> points, const NRMPotential& V, double N) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = std::abs(points[i] - points[j]);
            if (d == 0.0) return -std::numeric_limits<double>::infinity();
            s += 2.0 * std::log(d);
        }
        s -= N * V(points[i]);
    }
    return s;
}

void ChainConfig::validate() const {
    if (n == 0 || N == 0 || n > N) throw std::invalid_argument("ChainConfig: need 1 <= n <= N");
    if (sweeps < 4 || thin == 0) throw std::invalid_argument("ChainConfig: bad sweeps/thin");
}

ChainResult metropolis_sample(const NRMPotential& V, const ChainConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double r0 = std::sqrt(double(cfg.n) / double(cfg.N));
    std::vector<cplx> z(cfg.n);
    for (auto& p : z) p = std::sqrt(unif(rng)) * r0 * std::polar(1.0, 2.0 * pi * unif(rng));

    double step = 1.0 / std::sqrt(double(cfg.N));
    const std::size_t burn = cfg.sweeps / 2;
    const std::size_t window = 50 * cfg.n;
    std::size_t win_acc = 0, win_tot = 0, acc = 0, tot = 0;

    ChainResult out;
    out.seed = cfg.seed;
    out.sweeps = cfg.sweeps;
    for (std::size_t sweep = 0; sweep < cfg.sweeps; ++sweep) {
        for (std::size_t i = 0; i < cfg.n; ++i) {
            const cplx zi = z[i];
            const cplx zp = zi + step * cplx(gauss(rng), gauss(rng));
            double dlog = -double(cfg.N) * (V(zp) - V(zi));
            bool coincident = false;
            for (std::size_t j = 0; j < cfg.n; ++j) {
                if (j == i) continue;
                const double dn = std::abs(zp - z[j]);
                if (dn == 0.0) {
                    coincident = true;
                    break;
                }
                dlog += 2.0 * (std::log(dn) - std::log(std::abs(zi - z[j])));
            }
            const bool accept = !coincident && (dlog >= 0.0 || std::log(unif(rng)) < dlog);
            if (accept) z[i] = zp;
            ++win_tot;
            win_acc += accept;
            if (sweep >= burn) {
                ++tot;
                acc += accept;
            }
            if (sweep < burn && win_tot == window) {
                step *= std::exp(0.5 * (double(win_acc) / double(win_tot) - 0.35));
                win_acc = win_tot = 0;
            }
        }
        if (sweep >= burn && (sweep - burn) % cfg.thin == 0)
            out.samples.push_back({z, log_density(z, V, double(cfg.N))});
    }
    out.acceptance = double(acc) / double(tot);
    out.step = step;
    return out;
}

DensityField density_histogram(const std::vector<EigenSample>& samples, const HistGrid& grid,
                               double N) {
    if (samples.size() < 100)
        throw std::invalid_argument("density_histogram: need at least 100 samples");
    if (grid.nx == 0 || grid.ny == 0 || !(grid.x1 > grid.x0) || !(grid.y1 > grid.y0))
        throw std::invalid_argument("density_histogram: bad grid");
    const double hx = (grid.x1 - grid.x0) / double(grid.nx);
    const double hy = (grid.y1 - grid.y0) / double(grid.ny);
    DensityField out;
    out.grid = grid;
    out.rho.assign(grid.nx * grid.ny, 0.0);
    for (const auto& s : samples)
        for (cplx p : s.points) {
            const double fx = (p.real() - grid.x0) / hx;
            const double fy = (p.imag() - grid.y0) / hy;
            if (fx < 0.0 || fy < 0.0) continue;
            const std::size_t i = std::size_t(fx), j = std::size_t(fy);
            if (i >= grid.nx || j >= grid.ny) continue;
            out.rho[j * grid.nx + i] += 1.0;
        }
    const double scale = 1.0 / (double(samples.size()) * hx * hy * N);
    out.mass = 0.0;
    for (auto& v : out.rho) {
        v *= scale;
        out.mass += v * hx * hy;
    }
    return out;
}

PlanarOrthoResult planar_orthopoly(const NRMPotential& V, double N, std::size_t n_max) {
    if (!(N > 0.0)) throw std::invalid_argument("planar_orthopoly: N must be > 0");
    const std::size_t d = n_max + 1;

    // truncation radius: the weight times |z|^{2 n_max} must be negligible
    double R = 4.0;
    const double excess = 2.0 * double(d);
    for (;; R *= 2.0) {
        if (R > 1e6) throw std::invalid_argument("planar_orthopoly: weight does not decay");
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < 64; ++a)
            worst = std::min(worst, N * V(std::polar(R, 2.0 * pi * (double(a) + 0.5) / 64.0)));
        if (worst - excess * std::log(R) > 80.0) break;
    }

    const std::size_t panels = 48, nodes = 16;
    const std::size_t M = std::max<std::size_t>(64, 4 * n_max + 16);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd p(d);
    for (std::size_t pa = 0; pa < panels; ++pa) {
        const auto [rx, rw] = gauss_legendre(nodes, R * double(pa) / double(panels),
                                             R * double(pa + 1) / double(panels));
        for (std::size_t q = 0; q < nodes; ++q) {
            for (std::size_t a = 0; a < M; ++a) {
                const cplx z = std::polar(rx[q], 2.0 * pi * double(a) / double(M));
                const double w = rw[q] * rx[q] * (2.0 * pi / double(M)) * std::exp(-N * V(z));
                if (w == 0.0) continue;
                p(0) = 1.0;
                for (std::size_t k = 1; k < d; ++k) p(k) = p(k - 1) * z;
                H.selfadjointView<Eigen::Lower>().rankUpdate(p, w);
            }
        }
    }
    H = H.selfadjointView<Eigen::Lower>();
    // H(m, k) = <z^m, z^k> with the first slot conjugated
    H = H.conjugate();

    Eigen::LLT<Eigen::MatrixXcd> llt(H);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("planar_orthopoly: Gram matrix ill-conditioned");
    const Eigen::MatrixXcd L = llt.matrixL();

    PlanarOrthoResult out;
    out.norms.resize(d);
    for (std::size_t k = 0; k < d; ++k) out.norms[k] = L(k, k).real();
    out.gram_offdiag = 0.0;
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t k = 0; k < d; ++k)
            if (m != k)
                out.gram_offdiag = std::max(
                    out.gram_offdiag, std::abs(H(m, k)) / std::sqrt(H(m, m).real() * H(k, k).real()));

    // monic coefficients: P_n = L(n,n) * conj(L^{-1}) p
    const Eigen::MatrixXcd Linv = L.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXcd::Identity(d, d));
    Eigen::MatrixXcd C = Linv.conjugate();
    for (std::size_t n = 0; n < d; ++n) C.row(n) *= L(n, n);

    const double r_hi = std::min(R, std::sqrt(double(d) / N) + 1.0);
    const std::size_t nr = std::size_t(r_hi / 0.005) + 1;
    out.radii.resize(nr);
    out.mu_radial.assign(d, std::vector<double>(nr, 0.0));
    const std::size_t Me = 64;
    for (std::size_t r = 0; r < nr; ++r) {
        out.radii[r] = 0.005 * double(r);
        for (std::size_t a = 0; a < Me; ++a) {
            const cplx z = std::polar(out.radii[r], 2.0 * pi * double(a) / double(Me));
            const double w = std::exp(-N * V(z)) / double(Me);
            p(0) = 1.0;
            for (std::size_t k = 1; k < d; ++k) p(k) = p(k - 1) * z;
            for (std::size_t n = 0; n < d; ++n) {
                cplx val = 0.0;
                for (std::size_t k = 0; k <= n; ++k) val += C(n, k) * p(k);
                out.mu_radial[n][r] += std::norm(val) * w;
            }
        }
    }
    return out;
}

} // namespace laplab
