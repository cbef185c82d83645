#include "laplab/potential_theory.hpp"

#include "laplab/kernels.hpp"
#include "laplab/quadrature.hpp"

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
constexpr double inf = std::numeric_limits<double>::infinity();

bool has_coincident(const std::vector<cplx>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i] == pts[j]) return true;
    return false;
}

} // namespace

double DiscreteMeasure::mass() const {
    double m = 0.0;
    for (double w : weights) m += w;
    return m;
}

DiscreteMeasure DiscreteMeasure::atoms(std::vector<cplx> pts, double w) {
    DiscreteMeasure mu;
    mu.weights.assign(pts.size(), w);
    mu.points = std::move(pts);
    return mu;
}

double log_energy(const DiscreteMeasure& mu) {
    if (mu.points.size() != mu.weights.size())
        throw std::invalid_argument("log_energy: points/weights size mismatch");
    if (has_coincident(mu.points)) return inf;
    // ordered pairs: twice the i<j sum
    return -2.0 * kernels::pairwise_weighted_log_abs_sum(mu.points, mu.weights);
}

double total_energy(const DiscreteMeasure& mu, const ExternalField& V) {
    double field = 0.0;
    for (std::size_t k = 0; k < mu.points.size(); ++k) field += mu.weights[k] * V(mu.points[k]);
    return log_energy(mu) + 2.0 * field;
}

double total_potential(const DiscreteMeasure& mu, const ExternalField& V, cplx z) {
    return V(z) - kernels::weighted_log_abs_sum(mu.points, mu.weights, z);
}

double FeketeResult::delta() const { return std::exp(log_delta); }

FeketeResult fekete_points(const std::vector<cplx>& cloud, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("fekete_points: n must be >= 2");
    if (cloud.size() < n) throw std::invalid_argument("fekete_points: cloud smaller than n");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(cloud.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<cplx> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = cloud[idx[i]];

    std::vector<cplx> others(n - 1);
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            others.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others.push_back(pts[j]);
            double cur = -inf;
            if (std::find(others.begin(), others.end(), pts[i]) == others.end())
                cur = kernels::log_abs_sum(others, pts[i]);
            double best = cur;
            cplx best_pt = pts[i];
            for (const cplx& c : cloud) {
                if (std::find(others.begin(), others.end(), c) != others.end()) continue;
                const double v = kernels::log_abs_sum(others, c);
                if (v > best + 1e-13) {
                    best = v;
                    best_pt = c;
                }
            }
            if (best_pt != pts[i]) {
                pts[i] = best_pt;
                improved = true;
            }
        }
    }
    FeketeResult res;
    res.log_delta = kernels::pairwise_log_abs_sum(pts);
    res.points = std::move(pts);
    return res;
}

TransfiniteReport transfinite_diameter(const std::vector<cplx>& cloud, std::size_t n_max) {
    if (n_max < 4) throw std::invalid_argument("transfinite_diameter: n_max must be >= 4");
    TransfiniteReport rep;
    rep.monotone = true;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const auto fk = fekete_points(cloud, n, n);
        rep.d_n.push_back(std::exp(2.0 * fk.log_delta / double(n * (n - 1))));
        const std::size_t m = rep.d_n.size();
        if (m >= 2 && rep.d_n[m - 1] > rep.d_n[m - 2] + 1e-6) rep.monotone = false;
    }
    // fit log d_n = c0 + c1 log(n)/(n-1) + c2/(n-1), cap = exp(c0)
    std::vector<std::size_t> ns;
    for (std::size_t n = std::max<std::size_t>(8, n_max / 3); n <= n_max; ++n) ns.push_back(n);
    Eigen::MatrixXd A(ns.size(), 3);
    Eigen::VectorXd y(ns.size());
    for (std::size_t r = 0; r < ns.size(); ++r) {
        const double n = double(ns[r]);
        A(long(r), 0) = 1.0;
        A(long(r), 1) = std::log(n) / (n - 1.0);
        A(long(r), 2) = 1.0 / (n - 1.0);
        y(long(r)) = std::log(rep.d_n[ns[r] - 2]);
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
    rep.cap = std::exp(c(0));
    return rep;
}

double condenser_capacity_annulus(double R) {
    if (R <= 1.0 + 1e-12)
        throw std::invalid_argument("condenser_capacity_annulus: R must exceed 1 (touching plates)");
    return 2.0 * pi / std::log(R);
}

namespace {

double eq_energy(const std::vector<double>& x, double w,
                 const std::function<double(double)>& V) {
    double field = 0.0;
    for (double xi : x) field += V(xi);
    return -2.0 * w * w * kernels::pairwise_log_abs_sum_1d(x) + 2.0 * w * field;
}

} // namespace

Equilibrium1DResult equilibrium_measure_1d(const std::function<double(double)>& V,
                                           const std::function<double(double)>& Vp,
                                           const Equilibrium1DConfig& cfg) {
    if (cfg.n < 16) throw std::invalid_argument("equilibrium_measure_1d: n must be >= 16");
    if (cfg.t <= 0.0) throw std::invalid_argument("equilibrium_measure_1d: t must be positive");
    const std::size_t n = cfg.n;
    const double w = cfg.t / double(n);

    std::vector<double> x(n);
    if (cfg.constrained) {
        // Chebyshev midpoints: equispaced init relaxes toward the
        // edge-singular density too slowly for plain descent
        for (std::size_t i = 0; i < n; ++i)
            x[i] = cfg.lo + (cfg.hi - cfg.lo) *
                                0.5 * (1.0 - std::cos((double(i) + 0.5) * pi / double(n)));
    } else {
        const double hw = cfg.init_halfwidth > 0.0 ? cfg.init_halfwidth : 0.5 * std::sqrt(cfg.t);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = hw * (2.0 * double(i) / double(n - 1) - 1.0);
    }

    std::vector<double> g(n), recip(n), xn(n);
    auto gradient = [&](const std::vector<double>& p, std::vector<double>& out) {
        kernels::pairwise_recip_gradient(p, recip);
        for (std::size_t i = 0; i < n; ++i) out[i] = -2.0 * w * w * recip[i] + 2.0 * w * Vp(p[i]);
    };

    double e = eq_energy(x, w, V);
    double step = 1e-3;
    double gmax = inf;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        gradient(x, g);
        gmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // clamped atoms pressed against the wall are stationary
            const bool inactive = cfg.constrained && ((x[i] <= cfg.lo && g[i] > 0.0) ||
                                                      (x[i] >= cfg.hi && g[i] < 0.0));
            if (!inactive) gmax = std::max(gmax, std::abs(g[i]));
        }
        if (gmax < cfg.grad_tol) break;
        while (true) {
            for (std::size_t i = 0; i < n; ++i) {
                xn[i] = x[i] - step * g[i];
                if (cfg.constrained) xn[i] = std::clamp(xn[i], cfg.lo, cfg.hi);
            }
            std::sort(xn.begin(), xn.end());
            const double en = eq_energy(xn, w, V);
            if (en < e || step < 1e-16) {
                x.swap(xn);
                e = en;
                break;
            }
            step *= 0.5;
        }
        step *= 1.3;
    }

    Equilibrium1DResult res;
    res.w = w;
    res.energy = e;
    res.grad_residual = gmax;
    res.converged = gmax < cfg.grad_tol;
    double field = 0.0;
    for (double xi : x) field += V(xi);
    res.u_t = (e - w * field) / cfg.t;
    res.support_lo = x[0] - (x[1] - x[0]);
    res.support_hi = x[n - 1] + (x[n - 1] - x[n - 2]);
    if (cfg.constrained) {
        res.support_lo = std::max(res.support_lo, cfg.lo);
        res.support_hi = std::min(res.support_hi, cfg.hi);
    }
    res.x = std::move(x);
    return res;
}

DiscreteMeasure to_measure(const Equilibrium1DResult& eq) {
    DiscreteMeasure mu;
    mu.points.reserve(eq.x.size());
    for (double xi : eq.x) mu.points.emplace_back(xi, 0.0);
    mu.weights.assign(eq.x.size(), eq.w);
    return mu;
}

namespace {

struct WeightedGrid {
    std::vector<double> x, wq;  // nodes and quadrature weights times e^{-2NV}
};

WeightedGrid ortho_grid(const std::function<double(double)>& V, double N, std::size_t n_max) {
    // truncate where the integrand of the highest moment is negligible
    auto small_enough = [&](double x) {
        return 2.0 * N * V(x) - 2.0 * double(n_max) * std::log(std::max(std::abs(x), 1.0)) > 140.0;
    };
    double hi = 1.0, lo = -1.0;
    for (int i = 0; i < 60 && !small_enough(hi); ++i) hi *= 2.0;
    for (int i = 0; i < 60 && !small_enough(lo); ++i) lo *= 2.0;
    if (!small_enough(hi) || !small_enough(lo))
        throw std::invalid_argument("orthopoly_realline: weight does not decay (moment failure)");
    const std::size_t panels = 96, nodes = 24;
    const auto [gx, gw] = gauss_legendre(nodes, 0.0, 1.0);
    WeightedGrid grid;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + (hi - lo) * double(p) / double(panels);
        const double b = lo + (hi - lo) * double(p + 1) / double(panels);
        for (std::size_t q = 0; q < nodes; ++q) {
            const double xx = a + (b - a) * gx[q];
            grid.x.push_back(xx);
            grid.wq.push_back((b - a) * gw[q] * std::exp(-2.0 * N * V(xx)));
        }
    }
    return grid;
}

} // namespace

OrthoPolyResult orthopoly_realline(const std::function<double(double)>& V, double N,
                                   std::size_t n_max) {
    const auto grid = ortho_grid(V, N, n_max);
    const std::size_t G = grid.x.size();
    std::vector<double> pm(G, 0.0), pc(G, 1.0);
    OrthoPolyResult res;
    std::vector<double> h;  // squared norms
    for (std::size_t k = 0; k <= n_max; ++k) {
        double hk = 0.0, xk = 0.0;
        for (std::size_t i = 0; i < G; ++i) {
            hk += grid.wq[i] * pc[i] * pc[i];
            xk += grid.wq[i] * grid.x[i] * pc[i] * pc[i];
        }
        if (!(hk > 0.0)) throw std::runtime_error("orthopoly_realline: lost positivity (quadrature failure)");
        h.push_back(hk);
        res.norms.push_back(std::sqrt(hk));
        if (k == n_max) break;
        const double ak = xk / hk;
        const double bk = k == 0 ? hk : hk / h[k - 1];
        res.alpha.push_back(ak);
        res.beta.push_back(bk);
        for (std::size_t i = 0; i < G; ++i) {
            const double nxt = (grid.x[i] - ak) * pc[i] - (k == 0 ? 0.0 : bk * pm[i]);
            pm[i] = pc[i];
            pc[i] = nxt;
        }
    }
    for (std::size_t n = 1; n <= n_max; ++n) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(long(n), long(n));
        for (std::size_t i = 0; i < n; ++i) {
            J(long(i), long(i)) = res.alpha[i];
            if (i + 1 < n) {
                const double off = std::sqrt(res.beta[i + 1]);
                J(long(i), long(i + 1)) = off;
                J(long(i + 1), long(i)) = off;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        std::vector<double> z(es.eigenvalues().data(), es.eigenvalues().data() + n);
        res.zeros.push_back(std::move(z));
    }
    return res;
}

namespace {

// elementary symmetric polynomials e_1..e_n
void elem_sym(const std::vector<double>& zeta, std::vector<double>& e) {
    const std::size_t n = zeta.size();
    e.assign(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = std::min(k + 1, n); j >= 1; --j) e[j] += zeta[k] * e[j - 1];
}

} // namespace

HeineResult heine_average(const std::function<double(double)>& V, double N, std::size_t n,
                          std::size_t samples, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("heine_average: n must be >= 1");
    if (samples < 100) throw std::invalid_argument("heine_average: need at least 100 samples");
    const std::size_t chains = 4;
    const std::size_t per_chain = samples / chains;
    std::vector<std::vector<std::vector<double>>> draws(
        chains, std::vector<std::vector<double>>(n));  // [chain][coeff][sample] of e_{n-coeff}

    double acc_total = 0.0;
    std::uint64_t acc_count = 0;
    for (std::size_t c = 0; c < chains; ++c) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (c + 1));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> zeta(n);
        for (std::size_t i = 0; i < n; ++i) zeta[i] = 0.1 * double(i + 1) - 0.05 * double(n);
        double step = 0.5;
        const std::size_t burn = std::max<std::size_t>(500, per_chain / 2);
        std::size_t acc_win = 0, tot_win = 0;
        std::vector<double> esym;
        for (std::size_t sweep = 0; sweep < burn + per_chain; ++sweep) {
            for (std::size_t i = 0; i < n; ++i) {
                const double old = zeta[i];
                const double prop = old + step * gauss(rng);
                double dlog = -2.0 * N * (V(prop) - V(old));
                bool reject = false;
                for (std::size_t j = 0; j < n && !reject; ++j) {
                    if (j == i) continue;
                    if (prop == zeta[j]) reject = true;
                    else dlog += 2.0 * (std::log(std::abs(prop - zeta[j])) -
                                        std::log(std::abs(old - zeta[j])));
                }
                ++tot_win;
                if (!reject && (dlog >= 0.0 || unif(rng) < std::exp(dlog))) {
                    zeta[i] = prop;
                    ++acc_win;
                }
            }
            if (sweep < burn) {
                if (tot_win >= 50 * n) {
                    const double rate = double(acc_win) / double(tot_win);
                    step *= std::exp(0.5 * (rate - 0.35));
                    acc_win = tot_win = 0;
                }
            } else {
                acc_total += double(acc_win);
                acc_count += tot_win;
                acc_win = tot_win = 0;
                elem_sym(zeta, esym);
                for (std::size_t j = 0; j < n; ++j) draws[c][j].push_back(esym[n - j]);
            }
        }
    }

    HeineResult res;
    res.acceptance = acc_count ? acc_total / double(acc_count) : 0.0;
    res.coeffs.resize(n);
    res.se.resize(n);
    res.rhat = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        // pooled mean with the monic sign, batch-mean standard error
        double mean = 0.0;
        std::size_t total = 0;
        for (std::size_t c = 0; c < chains; ++c)
            for (double v : draws[c][j]) {
                mean += v;
                ++total;
            }
        mean /= double(total);
        const double sign = (n - j) % 2 == 0 ? 1.0 : -1.0;
        res.coeffs[j] = sign * mean;

        const std::size_t nb = 50;
        std::vector<double> bmeans;
        for (std::size_t c = 0; c < chains; ++c) {
            const auto& d = draws[c][j];
            const std::size_t bl = std::max<std::size_t>(1, d.size() / nb);
            for (std::size_t b = 0; b + 1 <= d.size() / bl; ++b) {
                double bm = 0.0;
                for (std::size_t i = b * bl; i < (b + 1) * bl; ++i) bm += d[i];
                bmeans.push_back(bm / double(bl));
            }
        }
        double bvar = 0.0, bmean = 0.0;
        for (double v : bmeans) bmean += v;
        bmean /= double(bmeans.size());
        for (double v : bmeans) bvar += (v - bmean) * (v - bmean);
        bvar /= double(bmeans.size() - 1);
        res.se[j] = std::sqrt(bvar / double(bmeans.size()));

        // split-chain R-hat
        std::vector<double> cm, cv;
        for (std::size_t c = 0; c < chains; ++c) {
            const auto& d = draws[c][j];
            for (int half = 0; half < 2; ++half) {
                const std::size_t lo = half * d.size() / 2, hi = (half + 1) * d.size() / 2;
                double m = 0.0;
                for (std::size_t i = lo; i < hi; ++i) m += d[i];
                m /= double(hi - lo);
                double v = 0.0;
                for (std::size_t i = lo; i < hi; ++i) v += (d[i] - m) * (d[i] - m);
                cm.push_back(m);
                cv.push_back(v / double(hi - lo - 1));
            }
        }
        const double m2 = double(draws[0][j].size() / 2);
        double W = 0.0, mbar = 0.0;
        for (double v : cv) W += v;
        W /= double(cv.size());
        for (double v : cm) mbar += v;
        mbar /= double(cm.size());
        double B = 0.0;
        for (double v : cm) B += (v - mbar) * (v - mbar);
        B *= m2 / double(cm.size() - 1);
        const double rhat = W > 0.0 ? std::sqrt(((m2 - 1.0) / m2 * W + B / m2) / W) : 1.0;
        res.rhat = std::max(res.rhat, rhat);
    }
    res.converged = res.rhat <= 1.1;
    return res;
}

} // namespace laplab
