#pragma once

#include <complex>
#include <string>
#include <vector>

namespace laplab {

using cplx = std::complex<double>;

enum class Orientation { interior, exterior };

// Polynomial/Laurent conformal map of the unit circle.
//   interior: f(w) = sum_{k=1..d} a_k w^k,          coeffs = {a_1, ..., a_d}
//   exterior: f(w) = c_1 w + c_0 + sum c_{-k} w^-k, coeffs = {c_1, c_0, c_{-1}, ...}
// The leading coefficient must be nonzero; exterior maps are normalized
// with c_1 real positive (conformal radius).
struct PolyMap {
    Orientation orientation = Orientation::interior;
    std::vector<cplx> coeffs;

    PolyMap() = default;
    PolyMap(Orientation o, std::vector<cplx> c);

    static PolyMap interior(std::vector<cplx> c) { return {Orientation::interior, std::move(c)}; }
    static PolyMap exterior(std::vector<cplx> c) { return {Orientation::exterior, std::move(c)}; }

    std::size_t degree() const { return coeffs.size(); }
    cplx leading() const;

    std::string to_json() const;
    static PolyMap from_json(const std::string& text);
};

// f, f' sampled at M equispaced angles on the unit circle.
struct BoundarySample {
    std::vector<double> angles;
    std::vector<cplx> points;
    std::vector<cplx> derivs;
};

// t0 = area/pi plus harmonic moments C_1..C_m.
struct MomentVector {
    double t0 = 0.0;
    std::vector<cplx> C;
};

cplx evaluate(const PolyMap& map, cplx w);
cplx evaluate_deriv(const PolyMap& map, cplx w);

// Samples at M equispaced angles; M must be a power of two with
// M >= 2*degree+2 so polynomial maps are alias-free.
BoundarySample derivative_on_circle(const PolyMap& map, std::size_t M);

// min over a sampled circle (4x oversampling) of |f'|.
double min_deriv_on_circle(const PolyMap& map, std::size_t M = 0);
bool is_regular(const PolyMap& map, double tol = 1e-9);

// Interior maps: pi * sum k |a_k|^2. Exterior maps unsupported.
double area(const PolyMap& map);
// Boundary quadrature (1/2) \oint Im(conj(f) f_theta) dtheta; exact for
// polynomial maps at sufficient M. Cross-check for area().
double area_boundary_quadrature(const PolyMap& map, std::size_t M = 256);

// C_n = (1/pi) \iint_D z^n dA for n = 1..m, by pullback to the reference
// disk with Gauss-Legendre (radial) x trapezoid (angular) quadrature,
// refined until the relative change is below 1e-10.
MomentVector harmonic_moments(const PolyMap& map, int m);

double conformal_radius(const PolyMap& map);
// Exterior: -(1/2pi) log R at infinity. Interior: +(1/2pi) log R at f(0).
double reduced_modulus(const PolyMap& map);

} // namespace laplab
