#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laplab/analysis.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace laplab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<cplx> circle_points(double r, std::size_t m, double t = 0.0) {
    std::vector<cplx> pts(m);
    for (std::size_t k = 0; k < m; ++k)
        pts[k] = std::polar(r, 2.0 * pi * double(k) / double(m)) + t;
    return pts;
}

} // namespace

TEST_CASE("box counting recovers the dimension of a segment") {
    std::vector<cplx> pts(10000);
    for (std::size_t k = 0; k < pts.size(); ++k)
        pts[k] = cplx(double(k) / double(pts.size()), 0.25);
    const std::vector<double> scales = {0.001, 0.003, 0.01, 0.03, 0.1, 0.2};
    const DimensionFit fit = box_counting_dimension(pts, scales);
    CHECK(fit.dimension == Approx(1.0).epsilon(0.05));
    CHECK(fit.r_squared > 0.99);
    CHECK(fit.counts.size() == scales.size());
}

TEST_CASE("box counting recovers the dimension of a filled square") {
    std::vector<cplx> pts;
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 0; j < 100; ++j)
            pts.emplace_back((double(i) + 0.5) / 100.0, (double(j) + 0.5) / 100.0);
    const std::vector<double> scales = {0.01, 0.02, 0.05, 0.1, 0.25, 0.5, 1.01};
    const DimensionFit fit = box_counting_dimension(pts, scales);
    CHECK(fit.dimension == Approx(2.0).epsilon(0.05));
    CHECK(fit.r_squared > 0.99);
}

TEST_CASE("box counting input guards") {
    std::vector<cplx> few(10, cplx(0.0, 0.0));
    const std::vector<double> scales = {0.001, 0.01, 0.1, 0.2};
    CHECK_THROWS_AS((void)box_counting_dimension(few, scales), std::invalid_argument);

    std::vector<cplx> pts(2000, cplx(0.0, 0.0));
    const std::vector<double> narrow = {0.01, 0.02, 0.04, 0.08};
    CHECK_THROWS_AS((void)box_counting_dimension(pts, narrow), std::invalid_argument);
    const std::vector<double> shorty = {0.001, 0.01, 0.5};
    CHECK_THROWS_AS((void)box_counting_dimension(pts, shorty), std::invalid_argument);
    const std::vector<double> bad = {-0.001, 0.01, 0.1, 0.5};
    CHECK_THROWS_AS((void)box_counting_dimension(pts, bad), std::invalid_argument);
}

TEST_CASE("hausdorff distance") {
    const std::vector<cplx> a = {cplx(0, 0), cplx(1, 0)};
    const std::vector<cplx> b = {cplx(0, 0), cplx(1, 0), cplx(3, 0)};
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, b) == Approx(2.0).epsilon(1e-14));
    CHECK(hausdorff_distance(b, a) == Approx(2.0).epsilon(1e-14));

    const auto c1 = circle_points(1.0, 512);
    const auto c2 = circle_points(1.1, 512);
    CHECK(hausdorff_distance(c1, c2) == Approx(0.1).epsilon(1e-3));

    CHECK_THROWS_AS((void)hausdorff_distance({}, a), std::invalid_argument);
}

TEST_CASE("identical trajectories compare to zero") {
    std::vector<BoundarySnapshot> traj;
    for (double t : {0.0, 0.5, 1.0})
        traj.push_back({t, circle_points(1.0 + 0.1 * t, 64), {1.0 + 0.1 * t}});
    const CompareReport rep = compare_trajectories(traj, traj);
    REQUIRE(rep.times.size() == 3);
    for (double h : rep.hausdorff) CHECK(h == 0.0);
    for (double g : rep.moment_gap) CHECK(g == 0.0);
    CHECK(rep.max_hausdorff == 0.0);
}

TEST_CASE("comparison interpolates the coarser trajectory in time") {
    std::vector<BoundarySnapshot> fine, coarse;
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.0})
        fine.push_back({t, circle_points(1.0 + 0.1 * t, 64), {}});
    for (double t : {0.0, 2.0})
        coarse.push_back({t, circle_points(1.0 + 0.1 * t, 64), {}});
    const CompareReport rep = compare_trajectories(fine, coarse);
    REQUIRE(rep.times.size() == 5);
    // radii are linear in t and angles match, so interpolation is exact
    CHECK(rep.max_hausdorff < 1e-14);
}

TEST_CASE("comparison reports offsets and moment gaps") {
    std::vector<BoundarySnapshot> a, b;
    for (double t : {0.0, 1.0}) {
        a.push_back({t, circle_points(1.0, 64), {0.0, 1.0}});
        b.push_back({t, circle_points(1.0, 64, 0.05), {0.0, 1.25}});
    }
    const CompareReport rep = compare_trajectories(a, b);
    for (double h : rep.hausdorff) CHECK(h == Approx(0.05).epsilon(1e-6));
    for (double g : rep.moment_gap) CHECK(g == Approx(0.25).epsilon(1e-12));
}

TEST_CASE("disjoint time ranges are rejected") {
    std::vector<BoundarySnapshot> a = {{0.0, circle_points(1.0, 16), {}},
                                       {1.0, circle_points(1.0, 16), {}}};
    std::vector<BoundarySnapshot> b = {{2.0, circle_points(1.0, 16), {}},
                                       {3.0, circle_points(1.0, 16), {}}};
    CHECK_THROWS_AS((void)compare_trajectories(a, b), std::invalid_argument);
}
