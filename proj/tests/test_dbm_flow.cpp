#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "laplab/dbm_flow.hpp"
#include "laplab/pg_exact.hpp"

#include <cmath>
#include <numbers>

using namespace laplab;
constexpr double pi = std::numbers::pi;

TEST_CASE("herglotz_extend on trigonometric data") {
    const std::size_t M = 32;
    std::vector<double> u(M, 1.0);
    auto S = herglotz_extend(u, M);
    CHECK(std::abs(S[0] - cplx(1.0)) < 1e-14);
    for (std::size_t k = 1; k < S.size(); ++k) CHECK(std::abs(S[k]) < 1e-14);

    for (std::size_t j = 0; j < M; ++j) u[j] = std::cos(2 * pi * double(j) / M);
    S = herglotz_extend(u, M);
    CHECK(std::abs(S[1] - cplx(1.0)) < 1e-13);  // S(z) = z
    CHECK(std::abs(S[0]) < 1e-13);

    for (std::size_t j = 0; j < M; ++j) u[j] = std::cos(2.0 * 2 * pi * double(j) / M);
    S = herglotz_extend(u, M);
    CHECK(std::abs(S[2] - cplx(1.0)) < 1e-13);  // S(z) = z^2

    CHECK_THROWS(herglotz_extend(std::vector<double>(7), 8));
}

TEST_CASE("dbm_rhs on radial maps") {
    DBMConfig cfg;
    cfg.M = 64;
    // f = z: rhs = z for any alpha at sigma = 0
    for (double alpha : {0.0, 1.0, 2.0, 3.0}) {
        cfg.alpha = alpha;
        std::vector<cplx> a(31, cplx(0.0));
        a[0] = 1.0;
        auto r = dbm_rhs(a, cfg);
        CHECK(std::abs(r[0] - cplx(1.0)) < 1e-13);
        for (std::size_t k = 1; k < r.size(); ++k) CHECK(std::abs(r[k]) < 1e-13);
    }
    // f = 2z, alpha = 2: rhs = z/2
    cfg.alpha = 2.0;
    std::vector<cplx> a(31, cplx(0.0));
    a[0] = 2.0;
    auto r = dbm_rhs(a, cfg);
    CHECK(std::abs(r[0] - cplx(0.5)) < 1e-13);
}

TEST_CASE("alpha = 0 rhs is z f' exactly") {
    DBMConfig cfg;
    cfg.M = 64;
    cfg.alpha = 0.0;
    std::vector<cplx> a(31, cplx(0.0));
    a[0] = 1.0;
    a[2] = 0.05;
    auto r = dbm_rhs(a, cfg);
    // z f' = z (1 + 0.15 z^2) -> coefficient k of a_k times k
    CHECK(std::abs(r[0] - cplx(1.0)) < 1e-13);
    CHECK(std::abs(r[2] - cplx(0.15)) < 1e-13);
}

TEST_CASE("exact radial solution (1 + alpha t)^(1/alpha)") {
    for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
        DBMConfig cfg;
        cfg.alpha = alpha;
        cfg.M = 64;
        cfg.dt = 1e-3;
        cfg.t_end = 1.0;
        auto traj = dbm_evolve(PolyMap::interior({1.0}), cfg);
        const double r = traj.snapshots.back().map.coeffs[0].real();
        CHECK(std::abs(r - std::pow(1.0 + alpha, 1.0 / alpha)) < 1e-6);
    }
}

TEST_CASE("alpha = 0: coefficients grow as a_k e^{kt}") {
    DBMConfig cfg;
    cfg.alpha = 0.0;
    cfg.M = 64;
    cfg.dt = 1e-3;
    cfg.t_end = 0.7;
    auto traj = dbm_evolve(PolyMap::interior({1.0, 0.0, 0.05}), cfg);
    const auto& m = traj.snapshots.back().map;
    CHECK(std::abs(m.coeffs[0] - cplx(std::exp(0.7))) < 1e-6);
    CHECK(std::abs(m.coeffs[2] - cplx(0.05 * std::exp(2.1))) < 1e-6);
}

TEST_CASE("alpha = 0 exterior: cluster coefficients relax as c_k e^{kt}") {
    DBMConfig cfg;
    cfg.alpha = 0.0;
    cfg.M = 64;
    cfg.dt = 1e-3;
    cfg.t_end = 0.7;
    auto traj = dbm_evolve(PolyMap::exterior({1.0, 0.0, 0.1}), cfg);
    const auto& m = traj.snapshots.back().map;
    CHECK(m.orientation == Orientation::exterior);
    CHECK(std::abs(m.coeffs[0] - cplx(std::exp(0.7))) < 1e-6);
    CHECK(std::abs(m.coeffs[2] - cplx(0.1 * std::exp(-0.7))) < 1e-6);
}

TEST_CASE("alpha = 0 smooths the cluster: curvature variance decreases to near zero") {
    // exterior normalization: the negative-power modes of phi(e^t z)
    // decay relative to the radius and the boundary rounds out
    DBMConfig cfg;
    cfg.alpha = 0.0;
    cfg.M = 128;
    cfg.dt = 1e-2;
    cfg.t_end = 3.0;
    cfg.snapshot_every = 0.25;
    PolyMap init = PolyMap::exterior({1.0, 0.0, 0.1, 0.05, cplx(0.0, 0.03)});
    const double v0 = curvature_variance(init);
    auto traj = dbm_evolve(init, cfg);
    CHECK_FALSE(traj.hit_singularity);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.snapshots) {
        const double v = curvature_variance(s.map);
        CHECK(v <= prev * (1.0 + 1e-9));
        prev = v;
    }
    CHECK(curvature_variance(traj.snapshots.back().map) < 1e-3 * v0);
}

TEST_CASE("alpha = 0 interior: relative distortion grows toward the cusp") {
    // same flow seen through an interior map: a_k e^{kt} steepens the
    // boundary until the f' zero crosses the unit circle
    DBMConfig cfg;
    cfg.alpha = 0.0;
    cfg.M = 128;
    cfg.dt = 1e-2;
    cfg.t_end = 3.0;
    auto traj = dbm_evolve(PolyMap::interior({1.0, 0.0, 0.05}), cfg);
    CHECK(traj.hit_singularity);
    // cusp when 0.15 e^{2t} = 1: t* = log(1/0.15)/2
    CHECK(traj.snapshots.back().t == doctest::Approx(0.5 * std::log(1.0 / 0.15)).epsilon(0.05));
}

TEST_CASE("alpha = 2 conserves harmonic moments; alpha = 0 does not") {
    const double tc = 0.2535;
    DBMConfig cfg;
    cfg.alpha = 2.0;
    cfg.M = 256;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5 * tc;
    cfg.snapshot_every = 0.05;
    auto traj = dbm_evolve(PolyMap::interior({1.0, 0.1}), cfg);
    CHECK(moment_drift(traj, 2) < 1e-4);

    // disk: all moments stay zero
    cfg.t_end = 0.5;
    auto dtraj = dbm_evolve(PolyMap::interior({1.0}), cfg);
    CHECK(moment_drift(dtraj, 2) < 1e-8);

    // smoothing flow: drift is O(1), reported only
    cfg.alpha = 0.0;
    cfg.t_end = 1.0;
    auto straj = dbm_evolve(PolyMap::interior({1.0, 0.1}), cfg);
    MESSAGE("alpha=0 moment drift (expected O(1)): ", moment_drift(straj, 1));
}

TEST_CASE("dbm alpha=2 matches the exact pg trajectory") {
    const double t_end = 0.1;
    DBMConfig cfg;
    cfg.alpha = 2.0;
    cfg.M = 128;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    auto traj = dbm_evolve(PolyMap::interior({1.0, 0.1}), cfg);

    auto pg = make_pg_state(PolyMap::interior({1.0, 0.1}), 2 * pi);
    PGState cur = pg;
    for (int i = 0; i < 100; ++i) cur = pg_step(cur, 1e-3);

    const auto& dm = traj.snapshots.back().map;
    CHECK(std::abs(dm.coeffs[0] - cur.map.coeffs[0]) < 1e-8);
    CHECK(std::abs(dm.coeffs[1] - cur.map.coeffs[1]) < 1e-8);
}

TEST_CASE("RK4 order: halving dt cuts the radius error ~16x") {
    auto run = [](double dt) {
        DBMConfig cfg;
        cfg.alpha = 3.0;
        cfg.M = 32;
        cfg.dt = dt;
        cfg.t_end = 1.0;
        auto traj = dbm_evolve(PolyMap::interior({1.0}), cfg);
        return std::abs(traj.snapshots.back().map.coeffs[0].real() - std::pow(4.0, 1.0 / 3.0));
    };
    const double e1 = run(0.04);
    const double e2 = run(0.02);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("sigma regularization delays the singularity guard") {
    auto guard_time = [](double sigma) {
        DBMConfig cfg;
        cfg.alpha = 2.0;
        cfg.sigma = sigma;
        cfg.M = 256;  // sigma thickens the coefficient tail of the boundary data
        cfg.dt = 1e-3;
        cfg.t_end = 10.0;
        auto traj = dbm_evolve(PolyMap::interior({1.0, 0.2}), cfg);
        return traj.snapshots.back().t;
    };
    double prev = -1.0;
    for (double s : {0.0, 0.5, 1.0}) {
        const double t = guard_time(s);
        CHECK(t >= prev - 1e-9);
        prev = t;
    }
}

TEST_CASE("config validation") {
    DBMConfig cfg;
    cfg.M = 100;
    CHECK_THROWS(cfg.validate());
    cfg.M = 128;
    cfg.dt = 0.0;
    CHECK_THROWS(cfg.validate());
}
