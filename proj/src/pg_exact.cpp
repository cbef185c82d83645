#include "laplab/pg_exact.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace laplab {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> real_coeffs(const PolyMap& map) {
    if (map.orientation != Orientation::interior)
        throw std::invalid_argument("pg_exact: interior maps only");
    if (map.degree() > 3) throw std::invalid_argument("pg_exact: degree <= 3 only");
    std::vector<double> a;
    for (const auto& c : map.coeffs) {
        if (c.imag() != 0.0) throw std::invalid_argument("pg_exact: real coefficients only");
        a.push_back(c.real());
    }
    return a;
}

double coeff(const std::vector<double>& a, std::size_t k) {  // 1-based, 0 beyond degree
    return (k >= 1 && k <= a.size()) ? a[k - 1] : 0.0;
}

// Closed-form area and moments of f = a1 w + a2 w^2 + a3 w^3:
//   area = pi (a1^2 + 2 a2^2 + 3 a3^2)
//   C_1  = a1^2 a2 + 3 a1 a2 a3
//   C_2  = a1^3 a3
// (cross-checked against the conformal_core quadrature in the tests)
double area_of(const std::vector<double>& a) {
    double s = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k) s += double(k) * coeff(a, k) * coeff(a, k);
    return pi * s;
}

double moment_of(const std::vector<double>& a, std::size_t n) {
    const double a1 = coeff(a, 1), a2 = coeff(a, 2), a3 = coeff(a, 3);
    if (n == 1) return a1 * a1 * a2 + 3.0 * a1 * a2 * a3;
    if (n == 2) return a1 * a1 * a1 * a3;
    throw std::invalid_argument("pg_exact: moment order out of range");
}

// residual F(a) = (area - A_target, C_k - C_k(0))
std::vector<double> residual(const std::vector<double>& a, double A_target,
                             const std::vector<double>& C0) {
    std::vector<double> F;
    F.push_back(area_of(a) - A_target);
    for (std::size_t k = 1; k < a.size(); ++k) F.push_back(moment_of(a, k) - C0[k - 1]);
    return F;
}

// analytic Jacobian rows: d(area)/da, d(C_k)/da
std::vector<std::vector<double>> jacobian(const std::vector<double>& a) {
    const std::size_t d = a.size();
    const double a1 = coeff(a, 1), a2 = coeff(a, 2), a3 = coeff(a, 3);
    std::vector<std::vector<double>> J(d, std::vector<double>(d, 0.0));
    for (std::size_t k = 1; k <= d; ++k) J[0][k - 1] = 2.0 * pi * double(k) * coeff(a, k);
    if (d >= 2) {
        J[1][0] = 2.0 * a1 * a2 + 3.0 * a2 * a3;
        J[1][1] = a1 * a1 + 3.0 * a1 * a3;
        if (d >= 3) J[1][2] = 3.0 * a1 * a2;
    }
    if (d >= 3) {
        J[2][0] = 3.0 * a1 * a1 * a3;
        J[2][1] = 0.0;
        J[2][2] = a1 * a1 * a1;
    }
    return J;
}

void solve_linear(std::vector<std::vector<double>> A, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t p = i;
        for (std::size_t r = i + 1; r < n; ++r)
            if (std::abs(A[r][i]) > std::abs(A[p][i])) p = r;
        std::swap(A[i], A[p]);
        std::swap(b[i], b[p]);
        if (A[i][i] == 0.0) throw NonConvergenceError("pg_step: singular Newton system", 0.0);
        for (std::size_t r = i + 1; r < n; ++r) {
            const double f = A[r][i] / A[i][i];
            for (std::size_t c = i; c < n; ++c) A[r][c] -= f * A[i][c];
            b[r] -= f * b[i];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t c = i + 1; c < n; ++c) b[i] -= A[i][c] * b[c];
        b[i] /= A[i][i];
    }
}

PolyMap map_from_real(const std::vector<double>& a) {
    std::vector<cplx> c(a.begin(), a.end());
    return PolyMap::interior(std::move(c));
}

} // namespace

PGState make_pg_state(const PolyMap& map, double rate) {
    const auto a = real_coeffs(map);
    PGState s;
    s.map = map;
    s.rate = rate;
    s.area0 = area_of(a);
    for (std::size_t k = 1; k < a.size(); ++k) s.conserved.push_back(moment_of(a, k));
    return s;
}

PGState pg_step(const PGState& state, double dt) {
    auto a = real_coeffs(state.map);
    const double A_target = state.area0 + state.rate * (state.t + dt);
    double res = 0.0;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        auto F = residual(a, A_target, state.conserved);
        res = 0.0;
        for (double f : F) res = std::max(res, std::abs(f));
        if (res < 1e-12) {
            converged = true;
            break;
        }
        solve_linear(jacobian(a), F);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] -= F[i];
    }
    if (!converged) throw NonConvergenceError("pg_step: Newton did not converge", res);
    PGState out = state;
    out.map = map_from_real(a);
    out.t = state.t + dt;
    if (min_deriv_on_circle(out.map) < 1e-6) throw SingularityError("singularity reached");
    return out;
}

CuspReport cusp_time(const PGState& state) {
    const auto a = real_coeffs(state.map);
    if (a.size() > 2) throw std::invalid_argument("cusp_time: degree-2 maps only");
    const double A0 = area_of(a);
    if (state.rate > 0.0)
        return {std::numeric_limits<double>::infinity(), false};
    if (a.size() < 2 || a[1] == 0.0)
        return {A0 / (2.0 * pi), true};  // disk exhausts, no cusp
    const double C1 = std::abs(moment_of(a, 1));
    const double bc = std::cbrt(C1 / 4.0);
    return {(A0 - 6.0 * pi * bc * bc) / (2.0 * pi), false};
}

double verify_pg_identity(const PGState& state, double dt, std::size_t M) {
    std::vector<cplx> ft(state.map.degree(), cplx(0.0));
    if (dt != 0.0) {
        const PGState fwd = pg_step(state, dt);
        const PGState bwd = pg_step(state, -dt);
        for (std::size_t k = 0; k < ft.size(); ++k)
            ft[k] = (fwd.map.coeffs[k] - bwd.map.coeffs[k]) / (2.0 * dt);
    }
    const double sign = state.rate / (2.0 * pi);
    double worst = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const double th = 2.0 * pi * double(j) / double(M);
        const cplx w = std::polar(1.0, th);
        cplx ftv(0.0);
        for (std::size_t k = ft.size(); k-- > 0;) ftv = ftv * w + ft[k];
        ftv *= w;
        const cplx ftheta = cplx(0.0, 1.0) * w * evaluate_deriv(state.map, w);
        worst = std::max(worst, std::abs(std::imag(std::conj(ftv) * ftheta) - sign));
    }
    return worst;
}

PGTrajectory pg_run(const PGState& init, double t_end, double dt) {
    PGTrajectory traj;
    traj.states.push_back(init);
    traj.min_fprime.push_back(min_deriv_on_circle(init.map));
    PGState cur = init;
    double step = dt;
    while (cur.t < t_end - 1e-15) {
        step = std::min(step, t_end - cur.t);
        try {
            PGState nxt = pg_step(cur, step);
            cur = std::move(nxt);
            traj.states.push_back(cur);
            traj.min_fprime.push_back(min_deriv_on_circle(cur.map));
            if (step < dt) step *= 2.0;
        } catch (const NonConvergenceError&) {
            step *= 0.5;
            if (step < 1e-14) break;  // cusp: no further continuation possible
        } catch (const SingularityError&) {
            step *= 0.5;
            if (step < 1e-14) break;
        }
    }
    return traj;
}

std::string pg_trajectory_csv(const PGTrajectory& traj) {
    std::ostringstream os;
    const std::size_t d = traj.states.empty() ? 0 : traj.states.front().map.degree();
    os << "t";
    for (std::size_t k = 1; k <= d; ++k) os << ",a_" << k;
    os << ",area";
    for (std::size_t k = 1; k < d; ++k) os << ",C_" << k;
    os << ",min_fprime\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& s = traj.states[i];
        const auto a = real_coeffs(s.map);
        put(s.t);
        for (double v : a) {
            os << ',';
            put(v);
        }
        os << ',';
        put(area_of(a));
        for (std::size_t k = 1; k < d; ++k) {
            os << ',';
            put(moment_of(a, k));
        }
        os << ',';
        put(traj.min_fprime[i]);
        os << '\n';
    }
    return os.str();
}

} // namespace laplab
