#include "laplab/polymap.hpp"

#include "laplab/fft.hpp"
#include "laplab/quadrature.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <stdexcept>

namespace laplab {

namespace {

constexpr double kCircleTol = 1e-12;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

PolyMap::PolyMap(Orientation o, std::vector<cplx> c) : orientation(o), coeffs(std::move(c)) {
    if (coeffs.empty()) throw std::invalid_argument("PolyMap: empty coefficient vector");
    if (std::abs(leading()) == 0.0) throw std::invalid_argument("PolyMap: zero leading coefficient");
    if (orientation == Orientation::exterior) {
        const cplx c1 = coeffs.front();
        if (c1.imag() != 0.0 || c1.real() <= 0.0)
            throw std::invalid_argument("PolyMap: exterior c_1 must be real positive");
    }
}

cplx PolyMap::leading() const { return coeffs.front(); }

cplx evaluate(const PolyMap& map, cplx w) {
    const double r = std::abs(w);
    if (map.orientation == Orientation::interior) {
        if (r > 1.0 + kCircleTol)
            throw std::invalid_argument("evaluate: wrong side of reference circle");
        cplx acc(0.0);
        for (auto it = map.coeffs.rbegin(); it != map.coeffs.rend(); ++it) acc = acc * w + *it;
        return acc * w;
    }
    if (r < 1.0 - kCircleTol)
        throw std::invalid_argument("evaluate: wrong side of reference circle");
    // c_1 w + c_0 + sum_{k>=1} c_{-k} w^{-k}, Horner in 1/w
    cplx acc(0.0);
    const cplx iw = 1.0 / w;
    for (std::size_t k = map.coeffs.size(); k-- > 2;) acc = (acc + map.coeffs[k]) * iw;
    cplx v = map.coeffs[0] * w + acc;
    if (map.coeffs.size() > 1) v += map.coeffs[1];
    return v;
}

cplx evaluate_deriv(const PolyMap& map, cplx w) {
    if (map.orientation == Orientation::interior) {
        cplx acc(0.0);
        for (std::size_t k = map.coeffs.size(); k-- > 0;)
            acc = acc * w + double(k + 1) * map.coeffs[k];
        return acc;
    }
    // c_1 - sum_{k>=1} k c_{-k} w^{-k-1}
    cplx acc(0.0);
    const cplx iw = 1.0 / w;
    for (std::size_t k = map.coeffs.size(); k-- > 2;) acc = (acc + double(k - 1) * map.coeffs[k]) * iw;
    return map.coeffs[0] - acc * iw;
}

BoundarySample derivative_on_circle(const PolyMap& map, std::size_t M) {
    if (!is_pow2(M)) throw std::invalid_argument("derivative_on_circle: M must be a power of two");
    if (M < 2 * map.degree() + 2)
        throw std::invalid_argument("derivative_on_circle: M too small (aliasing)");
    BoundarySample s;
    s.angles.resize(M);
    s.points.resize(M);
    s.derivs.resize(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double th = 2.0 * std::numbers::pi * double(j) / double(M);
        const cplx w = std::polar(1.0, th);
        s.angles[j] = th;
        s.points[j] = evaluate(map, w);
        s.derivs[j] = evaluate_deriv(map, w);
    }
    return s;
}

double min_deriv_on_circle(const PolyMap& map, std::size_t M) {
    if (M == 0) M = std::max<std::size_t>(64, next_pow2(4 * (map.degree() + 1)));
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < M; ++j) {
        const double th = 2.0 * std::numbers::pi * double(j) / double(M);
        mn = std::min(mn, std::abs(evaluate_deriv(map, std::polar(1.0, th))));
    }
    return mn;
}

bool is_regular(const PolyMap& map, double tol) { return min_deriv_on_circle(map) > tol; }

double area(const PolyMap& map) {
    if (map.orientation != Orientation::interior)
        throw std::invalid_argument("area: interior maps only");
    double s = 0.0;
    for (std::size_t k = 0; k < map.coeffs.size(); ++k)
        s += double(k + 1) * std::norm(map.coeffs[k]);
    return std::numbers::pi * s;
}

double area_boundary_quadrature(const PolyMap& map, std::size_t M) {
    M = std::max(M, next_pow2(2 * map.degree() + 2));
    double s = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const double th = 2.0 * std::numbers::pi * double(j) / double(M);
        const cplx w = std::polar(1.0, th);
        const cplx f = evaluate(map, w);
        const cplx ftheta = cplx(0.0, 1.0) * w * evaluate_deriv(map, w);
        s += std::imag(std::conj(f) * ftheta);
    }
    return 0.5 * s * 2.0 * std::numbers::pi / double(M);
}

namespace {

// One quadrature pass at given resolution.
std::vector<cplx> moment_pass(const PolyMap& map, int m, std::size_t nr, std::size_t M) {
    const auto [rx, rw] = gauss_legendre(nr, 0.0, 1.0);
    std::vector<cplx> C(m, cplx(0.0));
    std::vector<cplx> fpow(m);
    for (std::size_t ir = 0; ir < nr; ++ir) {
        const double r = rx[ir];
        for (std::size_t j = 0; j < M; ++j) {
            const double th = 2.0 * std::numbers::pi * double(j) / double(M);
            const cplx w = std::polar(r, th);
            const cplx f = evaluate(map, w);
            const double jac = std::norm(evaluate_deriv(map, w));
            cplx p(1.0);
            const double wgt = rw[ir] * r * jac;
            for (int n = 0; n < m; ++n) {
                p *= f;
                C[n] += wgt * p;
            }
        }
    }
    const double dth = 2.0 * std::numbers::pi / double(M);
    for (auto& c : C) c *= dth / std::numbers::pi;
    return C;
}

} // namespace

MomentVector harmonic_moments(const PolyMap& map, int m) {
    if (m < 1) throw std::invalid_argument("harmonic_moments: m must be >= 1");
    if (map.orientation != Orientation::interior)
        throw std::invalid_argument("harmonic_moments: interior maps only");
    const std::size_t d = map.degree();
    std::size_t nr = std::max<std::size_t>(16, (std::size_t(m) * d + 2 * d) / 2 + 2);
    std::size_t M = next_pow2(std::max<std::size_t>(32, std::size_t(m) * d + 2 * d + 2));
    std::vector<cplx> C = moment_pass(map, m, nr, M);
    for (int pass = 0; pass < 4; ++pass) {
        std::vector<cplx> C2 = moment_pass(map, m, nr * 2, M * 2);
        double rel = 0.0;
        for (int n = 0; n < m; ++n) {
            const double scale = std::max(1.0, std::abs(C2[n]));
            rel = std::max(rel, std::abs(C2[n] - C[n]) / scale);
        }
        C = std::move(C2);
        if (rel < 1e-10) break;
        nr *= 2;
        M *= 2;
    }
    MomentVector mv;
    mv.t0 = area(map) / std::numbers::pi;
    mv.C = std::move(C);
    return mv;
}

double conformal_radius(const PolyMap& map) { return std::abs(map.leading()); }

double reduced_modulus(const PolyMap& map) {
    const double R = conformal_radius(map);
    const double v = std::log(R) / (2.0 * std::numbers::pi);
    return map.orientation == Orientation::exterior ? -v : v;
}

std::string PolyMap::to_json() const {
    nlohmann::json j;
    j["orientation"] = orientation == Orientation::interior ? "interior" : "exterior";
    auto& arr = j["coeffs"] = nlohmann::json::array();
    for (const auto& c : coeffs) arr.push_back({c.real(), c.imag()});
    return j.dump();
}

PolyMap PolyMap::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string o = j.at("orientation").get<std::string>();
    if (o != "interior" && o != "exterior")
        throw std::invalid_argument("PolyMap: unknown orientation \"" + o + "\"");
    std::vector<cplx> c;
    for (const auto& e : j.at("coeffs")) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return {o == "interior" ? Orientation::interior : Orientation::exterior, std::move(c)};
}

} // namespace laplab
