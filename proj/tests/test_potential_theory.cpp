#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laplab/potential_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace laplab;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<cplx> circle_cloud(std::size_t m, double r = 1.0) {
    std::vector<cplx> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = std::polar(r, 2.0 * pi * double(j) / double(m));
    return c;
}

std::vector<cplx> segment_cloud(std::size_t m) {
    std::vector<cplx> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = cplx(-1.0 + 2.0 * double(j) / double(m - 1), 0.0);
    return c;
}

// sup |empirical CDF - F| over the sample points
double ks_against(const std::vector<double>& pts, const std::function<double(double)>& F) {
    std::vector<double> s = pts;
    std::sort(s.begin(), s.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = F(s[i]);
        ks = std::max(ks, std::abs(f - double(i) / double(s.size())));
        ks = std::max(ks, std::abs(f - double(i + 1) / double(s.size())));
    }
    return ks;
}

double semicircle_cdf(double x) {
    x = std::clamp(x, -1.0, 1.0);
    return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / pi;
}

} // namespace

TEST_CASE("log energy conventions") {
    CHECK(log_energy(DiscreteMeasure::atoms({{0.0, 0.0}, {1.0, 0.0}})) == doctest::Approx(0.0));
    const double e = std::exp(1.0);
    CHECK(log_energy(DiscreteMeasure::atoms({{0.0, 0.0}, {e, 0.0}})) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::isinf(log_energy(DiscreteMeasure::atoms({{1.0, 0.0}, {1.0, 0.0}}))));

    // 4th roots of unity: E = -2 log Delta_4 = -2 log 16 at V = 0
    auto mu = DiscreteMeasure::atoms({{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}});
    CHECK(total_energy(mu, [](cplx) { return 0.0; }) == doctest::Approx(-2.0 * std::log(16.0)).epsilon(1e-12));

    // weighted: two half masses
    DiscreteMeasure half;
    half.points = {{0.0, 0.0}, {e, 0.0}};
    half.weights = {0.5, 0.5};
    CHECK(log_energy(half) == doctest::Approx(-0.5).epsilon(1e-12));

    // total potential of a unit charge
    auto one = DiscreteMeasure::atoms({{0.0, 0.0}});
    CHECK(total_potential(one, [](cplx z) { return std::norm(z); }, {2.0, 0.0}) ==
          doctest::Approx(4.0 - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("Fekete points on the circle and the segment") {
    const auto cloud = circle_cloud(1 << 10);
    auto f2 = fekete_points(cloud, 2, 1);
    CHECK(f2.delta() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(f2.points[0] + f2.points[1]) < 1e-10);  // antipodal

    auto f4 = fekete_points(cloud, 4, 1);
    CHECK(f4.delta() == doctest::Approx(16.0).epsilon(1e-10));

    auto f3 = fekete_points(segment_cloud(2001), 3, 1);
    std::vector<double> xs;
    for (auto z : f3.points) xs.push_back(z.real());
    std::sort(xs.begin(), xs.end());
    CHECK(xs[0] == doctest::Approx(-1.0));
    CHECK(xs[1] == doctest::Approx(0.0));
    CHECK(xs[2] == doctest::Approx(1.0));
    CHECK(f3.delta() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("transfinite diameter: circle, segment, scaling") {
    auto circ = transfinite_diameter(circle_cloud(1 << 10), 24);
    CHECK(circ.monotone);
    CHECK(circ.cap == doctest::Approx(1.0).epsilon(0.01));
    // closed form d_n = n^{1/(n-1)} for roots of unity
    // cloud resolution limits the n-gon fit unless n divides the cloud size
    for (std::size_t n = 2; n <= 24; ++n)
        CHECK(circ.d_n[n - 2] == doctest::Approx(std::pow(double(n), 1.0 / double(n - 1))).epsilon(1e-4));

    auto seg = transfinite_diameter(segment_cloud(2001), 24);
    CHECK(seg.cap == doctest::Approx(0.5).epsilon(0.01));

    auto disk2 = transfinite_diameter(circle_cloud(1 << 10, 2.0), 24);
    CHECK(disk2.cap == doctest::Approx(2.0).epsilon(0.01));
    CHECK(disk2.cap / circ.cap == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("annulus condenser capacity") {
    CHECK(condenser_capacity_annulus(std::exp(1.0)) == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(condenser_capacity_annulus(std::exp(2.0)) == doctest::Approx(pi).epsilon(1e-12));
    CHECK_THROWS(condenser_capacity_annulus(1.0 + 1e-13));
    CHECK_THROWS(condenser_capacity_annulus(0.5));
}

TEST_CASE("equilibrium measure for V = x^2: semicircle support and constant potential") {
    auto V = [](double x) { return x * x; };
    auto Vp = [](double x) { return 2.0 * x; };
    Equilibrium1DConfig cfg;
    cfg.t = 1.0;
    cfg.n = 200;
    auto eq = equilibrium_measure_1d(V, Vp, cfg);
    CHECK(eq.support_hi == doctest::Approx(1.0).epsilon(0.02));
    CHECK(eq.support_lo == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(ks_against(eq.x, semicircle_cdf) < 0.05);
    const double u1 = std::log(2.0) + 0.5;
    CHECK(eq.u_t == doctest::Approx(u1).epsilon(0.02));

    // equilibrium condition on midpoints between atoms and off support
    auto mu = to_measure(eq);
    auto Vc = [](cplx z) { return std::norm(z); };
    double umin = 1e300, umax = -1e300;
    for (std::size_t i = 0; i + 1 < eq.x.size(); ++i) {
        const double u = total_potential(mu, Vc, {0.5 * (eq.x[i] + eq.x[i + 1]), 0.0});
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    CHECK(umax - umin <= 1e-2 * std::abs(eq.u_t));
    for (int j = 0; j < 10000; ++j) {
        const double x = -3.0 + 6.0 * double(j) / 9999.0;
        if (x > eq.support_lo && x < eq.support_hi) continue;
        CHECK(total_potential(mu, Vc, {x, 0.0}) >= eq.u_t - 1e-3);
    }
}

TEST_CASE("equilibrium support scales as sqrt(t)") {
    auto V = [](double x) { return x * x; };
    auto Vp = [](double x) { return 2.0 * x; };
    Equilibrium1DConfig cfg;
    cfg.t = 4.0;
    cfg.n = 200;
    auto eq = equilibrium_measure_1d(V, Vp, cfg);
    CHECK(eq.support_hi == doctest::Approx(2.0).epsilon(0.02));
    CHECK(eq.support_lo == doctest::Approx(-2.0).epsilon(0.02));
}

TEST_CASE("Robin measure of the segment: arcsine points and -log cap energy") {
    auto V = [](double) { return 0.0; };
    auto Vp = [](double) { return 0.0; };
    Equilibrium1DConfig cfg;
    cfg.t = 1.0;
    cfg.n = 200;
    cfg.constrained = true;
    auto eq = equilibrium_measure_1d(V, Vp, cfg);
    CHECK(ks_against(eq.x, [](double x) {
              return 0.5 + std::asin(std::clamp(x, -1.0, 1.0)) / pi;
          }) < 0.05);
    // W -> -t^2 log cap([-1,1]) = log 2, discrete bias O(log n / n)
    CHECK(eq.energy == doctest::Approx(std::log(2.0)).epsilon(0.08));
    // midpoints of the interior gaps: the arcsine edge gaps are atom-scale
    // (O(1/n^2)) and probe the discretization, not the measure
    auto mu = to_measure(eq);
    double umin = 1e300, umax = -1e300;
    for (std::size_t i = 5; i + 6 < eq.x.size(); ++i) {
        const double u = total_potential(mu, [](cplx) { return 0.0; },
                                         {0.5 * (eq.x[i] + eq.x[i + 1]), 0.0});
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    CHECK(umax - umin <= 1e-2);
}

TEST_CASE("Stieltjes polynomials for the Gaussian weight") {
    auto V = [](double x) { return x * x; };
    auto op = orthopoly_realline(V, 1.0, 6);
    for (double a : op.alpha) CHECK(std::abs(a) < 1e-12);
    // <x^2> = 1/4 for exp(-2x^2): Q_2 = x^2 - 1/4
    CHECK(op.beta[1] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(op.zeros[1][0] == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(op.zeros[1][1] == doctest::Approx(0.5).epsilon(1e-9));
    // ||1||^2 = integral of exp(-2x^2) = sqrt(pi/2)
    CHECK(op.norms[0] == doctest::Approx(std::pow(pi / 2.0, 0.25)).epsilon(1e-10));
    CHECK(op.zeros[0][0] == doctest::Approx(0.0));  // Q_1 = x
}

TEST_CASE("zero-counting measure meets the equilibrium measure at n = N") {
    auto V = [](double x) { return x * x; };
    auto Vp = [](double x) { return 2.0 * x; };
    auto op = orthopoly_realline(V, 40.0, 40);
    Equilibrium1DConfig cfg;
    cfg.t = 1.0;
    cfg.n = 200;
    auto eq = equilibrium_measure_1d(V, Vp, cfg);
    // KS between the two empirical CDFs
    const auto& z = op.zeros[39];
    double ks = 0.0;
    for (double x : z) {
        const double Fz = double(std::lower_bound(z.begin(), z.end(), x) - z.begin() + 1) / double(z.size());
        const double Fe = double(std::lower_bound(eq.x.begin(), eq.x.end(), x) - eq.x.begin()) / double(eq.x.size());
        ks = std::max(ks, std::abs(Fz - Fe));
    }
    CHECK(ks <= 0.08);
    CHECK(std::log(op.norms[40]) / 40.0 == doctest::Approx(-eq.u_t).epsilon(0.1));
}

TEST_CASE("Heine averages reproduce the Stieltjes polynomials") {
    auto V2 = [](double x) { return x * x; };
    auto h1 = heine_average(V2, 1.0, 1, 40000, 11);
    CHECK(h1.converged);
    CHECK(h1.acceptance > 0.1);
    CHECK(h1.acceptance < 0.7);
    CHECK(std::abs(h1.coeffs[0]) <= 3.0 * h1.se[0] + 1e-12);

    auto h2 = heine_average(V2, 1.0, 2, 80000, 12);
    CHECK(h2.converged);
    CHECK(std::abs(h2.coeffs[0] - (-0.25)) <= 3.0 * h2.se[0]);
    CHECK(std::abs(h2.coeffs[1]) <= 3.0 * h2.se[1]);

    auto V4 = [](double x) { return x * x * x * x; };
    auto op = orthopoly_realline(V4, 1.0, 3);
    // Q_3 = x^3 - (beta_1 + beta_2) x for an even weight
    const double c1 = -(op.beta[1] + op.beta[2]);
    auto h3 = heine_average(V4, 1.0, 3, 120000, 13);
    CHECK(h3.converged);
    CHECK(std::abs(h3.coeffs[1] - c1) <= 3.0 * h3.se[1]);
    CHECK(std::abs(h3.coeffs[0]) <= 3.0 * h3.se[0]);
    CHECK(std::abs(h3.coeffs[2]) <= 3.0 * h3.se[2]);
}

TEST_CASE("validation errors") {
    CHECK_THROWS(fekete_points(circle_cloud(8), 16, 0));
    CHECK_THROWS(transfinite_diameter(circle_cloud(64), 3));
    Equilibrium1DConfig cfg;
    cfg.n = 8;
    CHECK_THROWS(equilibrium_measure_1d([](double) { return 0.0; }, [](double) { return 0.0; }, cfg));
}
