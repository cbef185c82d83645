#include "laplab/dbm_flow.hpp"

#include "laplab/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace laplab {

namespace {

constexpr double pi = std::numbers::pi;

void strip_tail(std::vector<cplx>& c, double tol = 1e-13) {
    double mx = 0.0;
    for (const auto& v : c) mx = std::max(mx, std::abs(v));
    std::size_t d = c.size();
    while (d > 1 && std::abs(c[d - 1]) < tol * std::max(1.0, mx)) --d;
    c.resize(d);
}

// stored index -> power of z (interior: a_1..a_D; exterior: c_1, c_0, c_{-1}, ...)
int power_of(Orientation ori, std::size_t i) {
    return ori == Orientation::interior ? int(i) + 1 : 1 - int(i);
}

std::vector<cplx> deriv_values(Orientation ori, const std::vector<cplx>& coeffs, std::size_t M) {
    std::vector<cplx> spec(M, cplx(0.0));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const int p = power_of(ori, i);
        if (p != 0) spec[std::size_t(((p - 1) % int(M) + int(M)) % int(M))] += double(p) * coeffs[i];
    }
    return eval_on_circle(spec, M);
}

// coefficients of w f'(w) S(w) at the stored powers, exact at M nodes
// (total mode span stays below M, so the product does not alias)
std::vector<cplx> flow_coeffs(Orientation ori, std::size_t D, const std::vector<cplx>& fp,
                              const std::vector<cplx>& S_coeffs, std::size_t M) {
    std::vector<cplx> Sv = eval_on_circle(S_coeffs, M);
    // exterior extension has conjugate boundary values of the interior one
    if (ori == Orientation::exterior)
        for (auto& v : Sv) v = std::conj(v);
    std::vector<cplx> prod(M);
    for (std::size_t j = 0; j < M; ++j) {
        const cplx w = std::polar(1.0, 2.0 * pi * double(j) / double(M));
        prod[j] = w * fp[j] * Sv[j];
    }
    fft(prod);
    std::vector<cplx> out(D);
    for (std::size_t i = 0; i < D; ++i) {
        const int p = power_of(ori, i);
        out[i] = prod[std::size_t((p % int(M) + int(M)) % int(M))] / double(M);
    }
    return out;
}

void check_tail(const std::vector<cplx>& coeffs, double guard) {
    const std::size_t D = coeffs.size();
    if (D < 8) return;
    double mx = 0.0;
    for (const auto& v : coeffs) mx = std::max(mx, std::abs(v));
    for (std::size_t k = D - D / 10; k < D; ++k)
        if (std::abs(coeffs[k]) > guard * std::max(1.0, mx))
            throw ResolutionError("resolution exceeded: coefficient tail above guard; double M");
}

// High modes of the flow amplify like e^{kt} for small alpha, so FFT
// roundoff seeded into empty modes must be scrubbed each step or it
// swamps the spectrum long before t_end.
void state_filter(std::vector<cplx>& a) {
    double mx = 0.0;
    for (const auto& v : a) mx = std::max(mx, std::abs(v));
    const double cut = 1e-14 * std::max(1.0, mx);
    for (auto& v : a)
        if (std::abs(v) < cut) v = cplx(0.0);
}

double min_abs(const std::vector<cplx>& v) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& x : v) mn = std::min(mn, std::abs(x));
    return mn;
}

} // namespace

void DBMConfig::validate() const {
    if (!is_pow2(M) || M < 8) throw std::invalid_argument("DBMConfig: M must be a power of two >= 8");
    if (dt <= 0.0) throw std::invalid_argument("DBMConfig: dt must be positive");
    if (sigma < 0.0) throw std::invalid_argument("DBMConfig: sigma must be >= 0");
}

std::vector<cplx> herglotz_extend(const std::vector<double>& u, std::size_t M) {
    if (u.size() != M || !is_pow2(M))
        throw std::invalid_argument("herglotz_extend: u must have power-of-two length M");
    const auto uh = fft_coeffs(u);
    std::vector<cplx> S(M / 2);
    S[0] = uh[0].real();
    for (std::size_t k = 1; k < M / 2; ++k) S[k] = 2.0 * uh[k];
    return S;
}

std::vector<cplx> dbm_rhs(const std::vector<cplx>& coeffs, const DBMConfig& cfg,
                          Orientation ori) {
    check_tail(coeffs, cfg.tail_guard);
    const std::size_t M = cfg.M;
    const auto fp = deriv_values(ori, coeffs, M);
    std::vector<double> u(M);
    for (std::size_t j = 0; j < M; ++j)
        u[j] = std::pow(std::norm(fp[j]) + cfg.sigma * cfg.sigma, -0.5 * cfg.alpha);
    return flow_coeffs(ori, coeffs.size(), fp, herglotz_extend(u, M), M);
}

std::vector<cplx> herglotz_euler_step(const std::vector<cplx>& coeffs,
                                      const std::vector<double>& u, double dt,
                                      double tail_guard) {
    check_tail(coeffs, tail_guard);
    const std::size_t M = u.size();
    const auto fp = deriv_values(Orientation::interior, coeffs, M);
    auto vel = flow_coeffs(Orientation::interior, coeffs.size(), fp, herglotz_extend(u, M), M);
    std::vector<cplx> out = coeffs;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += dt * vel[k];
    return out;
}

std::vector<double> boundary_curvature(const PolyMap& map, std::size_t M) {
    std::vector<double> kappa(M);
    for (std::size_t j = 0; j < M; ++j) {
        const cplx w = std::polar(1.0, 2.0 * pi * double(j) / double(M));
        const cplx fp = evaluate_deriv(map, w);
        cplx fpp(0.0);
        if (map.orientation == Orientation::interior) {
            for (std::size_t k = map.degree(); k-- > 1;)
                fpp = fpp * w + double(k + 1) * double(k) * map.coeffs[k];
        } else {
            const cplx iw = 1.0 / w;
            for (std::size_t k = map.coeffs.size(); k-- > 2;)
                fpp = fpp * iw + double(k - 1) * double(k) * map.coeffs[k];
            fpp *= iw * iw * iw;
        }
        kappa[j] = std::real(1.0 + w * fpp / fp) / std::abs(fp);
    }
    return kappa;
}

double curvature_variance(const PolyMap& map, std::size_t M) {
    const auto k = boundary_curvature(map, M);
    double mean = 0.0;
    for (double v : k) mean += v;
    mean /= double(M);
    double var = 0.0;
    for (double v : k) var += (v - mean) * (v - mean);
    return var / double(M);
}

DBMTrajectory dbm_evolve(const PolyMap& init, const DBMConfig& cfg) {
    cfg.validate();
    if (!is_regular(init)) throw std::invalid_argument("dbm_evolve: initial map not regular");
    const Orientation ori = init.orientation;
    const std::size_t D = cfg.M / 2 - 1;
    if (init.coeffs.size() > D) throw ResolutionError("resolution exceeded: init degree >= M/2");

    std::vector<cplx> a(D, cplx(0.0));
    std::copy(init.coeffs.begin(), init.coeffs.end(), a.begin());

    DBMTrajectory traj;
    auto record = [&](double t, const std::vector<cplx>& c) {
        std::vector<cplx> trimmed = c;
        strip_tail(trimmed);
        traj.snapshots.push_back({PolyMap(ori, std::move(trimmed)), t});
    };
    record(0.0, a);

    double t = 0.0, dt = cfg.dt;
    double next_snap = cfg.snapshot_every > 0 ? cfg.snapshot_every : cfg.t_end;
    const double dt_floor = cfg.dt / double(1 << 20);
    while (t < cfg.t_end - 1e-14) {
        const double h = std::min(dt, cfg.t_end - t);
        std::vector<cplx> anew;
        try {
            const auto k1 = dbm_rhs(a, cfg, ori);
            auto tmp = a;
            for (std::size_t i = 0; i < D; ++i) tmp[i] = a[i] + 0.5 * h * k1[i];
            const auto k2 = dbm_rhs(tmp, cfg, ori);
            for (std::size_t i = 0; i < D; ++i) tmp[i] = a[i] + 0.5 * h * k2[i];
            const auto k3 = dbm_rhs(tmp, cfg, ori);
            for (std::size_t i = 0; i < D; ++i) tmp[i] = a[i] + h * k3[i];
            const auto k4 = dbm_rhs(tmp, cfg, ori);
            anew = a;
            for (std::size_t i = 0; i < D; ++i)
                anew[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            state_filter(anew);
            // exterior c_1 has velocity c_1 * mean(u), exactly real; the
            // imaginary residue is FFT roundoff and must not accumulate
            if (ori == Orientation::exterior) anew[0] = cplx(anew[0].real(), 0.0);
            check_tail(anew, cfg.tail_guard);
        } catch (const ResolutionError&) {
            dt *= 0.5;
            if (dt < dt_floor) throw;
            continue;
        }

        const auto fp = deriv_values(ori, anew, cfg.M);
        if (min_abs(fp) < 1e-6) {
            traj.hit_singularity = true;
            break;
        }
        {
            std::vector<cplx> trimmed = anew;
            strip_tail(trimmed);
            if (curvature_variance(PolyMap(ori, trimmed), cfg.M) > cfg.curvature_cap) {
                dt *= 0.5;
                if (dt < dt_floor) {
                    traj.hit_singularity = true;
                    break;
                }
                continue;
            }
        }

        a = std::move(anew);
        t += h;
        if (dt < cfg.dt) dt = std::min(cfg.dt, dt * 2.0);
        if (t >= next_snap - 1e-12 && t < cfg.t_end - 1e-14) {
            record(t, a);
            next_snap += cfg.snapshot_every > 0 ? cfg.snapshot_every : cfg.t_end;
        }
    }
    record(t, a);
    return traj;
}

double moment_drift(const DBMTrajectory& traj, int m) {
    if (traj.snapshots.empty()) return 0.0;
    const auto mv0 = harmonic_moments(traj.snapshots.front().map, m);
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
        const auto mv = harmonic_moments(traj.snapshots[i].map, m);
        for (int k = 0; k < m; ++k) {
            const double scale = std::max(1e-6 * mv0.t0, std::abs(mv0.C[k]));
            worst = std::max(worst, std::abs(mv.C[k] - mv0.C[k]) / scale);
        }
    }
    return worst;
}

} // namespace laplab
