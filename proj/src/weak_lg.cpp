#include "laplab/weak_lg.hpp"

#include "laplab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace laplab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kSupportTube = 1e-3;

double dist_to_support(const DiscreteMeasure& mu, cplx z) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : mu.points) d = std::min(d, std::abs(z - p));
    return d;
}

} // namespace

cplx cauchy_transform(const DiscreteMeasure& mu, cplx z) {
    if (dist_to_support(mu, z) < 1e-12)
        throw std::invalid_argument("cauchy_transform: z on the support of mu");
    return kernels::cauchy_sum(mu.points, mu.weights, z);
}

PsiValue psi_eval(const PsiField& field, cplx z) {
    const double lp = field.V(z) + kernels::weighted_log_abs_sum(field.mu.points, field.mu.weights, z);
    if (std::abs(lp) > 300.0) return {lp, true};
    return {std::exp(lp), false};
}

cplx psi_gradient(const PsiField& field, cplx z) {
    return field.dV(z) + kernels::cauchy_sum(field.mu.points, field.mu.weights, z);
}

GrowthFrontier weak_boundary(const PsiField& field, double tol) {
    const GridSpec& gr = field.grid;
    if (gr.nx < 8 || gr.ny < 8) throw std::invalid_argument("weak_boundary: grid too coarse");
    const double hx = (gr.x1 - gr.x0) / double(gr.nx - 1);
    const double hy = (gr.y1 - gr.y0) / double(gr.ny - 1);
    auto node = [&](std::size_t i, std::size_t j) {
        return cplx(gr.x0 + hx * double(i), gr.y0 + hy * double(j));
    };
    std::vector<double> re(gr.nx * gr.ny);
    std::vector<char> valid(gr.nx * gr.ny);
    for (std::size_t j = 0; j < gr.ny; ++j)
        for (std::size_t i = 0; i < gr.nx; ++i) {
            const cplx z = node(i, j);
            const bool ok = dist_to_support(field.mu, z) > 1e-6;
            valid[j * gr.nx + i] = ok;
            re[j * gr.nx + i] = ok ? psi_gradient(field, z).real() : 0.0;
        }

    GrowthFrontier out;
    std::vector<std::pair<cplx, cplx>> segments;
    auto crossing = [&](cplx a, double fa, cplx b, double fb) {
        const double s = fa / (fa - fb);
        return a + s * (b - a);
    };
    for (std::size_t j = 0; j + 1 < gr.ny; ++j)
        for (std::size_t i = 0; i + 1 < gr.nx; ++i) {
            const std::size_t c[4] = {j * gr.nx + i, j * gr.nx + i + 1,
                                      (j + 1) * gr.nx + i + 1, (j + 1) * gr.nx + i};
            if (!valid[c[0]] || !valid[c[1]] || !valid[c[2]] || !valid[c[3]]) continue;
            const cplx zc[4] = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
            std::vector<cplx> pts;
            for (int e = 0; e < 4; ++e) {
                const double fa = re[c[e]], fb = re[c[(e + 1) % 4]];
                if ((fa < 0.0) != (fb < 0.0)) {
                    const cplx p = crossing(zc[e], fa, zc[(e + 1) % 4], fb);
                    // filter before pairing so a spurious branch crossing the
                    // same cell cannot eat a genuine vertex
                    if (std::abs(psi_gradient(field, p)) <= tol)
                        pts.push_back(p);
                    else
                        ++out.rejected;
                }
            }
            for (std::size_t p = 0; p + 1 < pts.size(); p += 2)
                segments.emplace_back(pts[p], pts[p + 1]);
        }

    // chain segments into polylines; endpoints from neighbouring cells agree
    // only to roundoff, so match them through a proximity hash
    const double match_eps = 1e-6 * std::min(hx, hy);
    auto bucket = [&](cplx z) {
        return std::pair<long long, long long>(std::llround(4.0 * (z.real() - gr.x0) / hx),
                                               std::llround(4.0 * (z.imag() - gr.y0) / hy));
    };
    std::map<std::pair<long long, long long>, std::vector<std::size_t>> ends;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        ends[bucket(segments[s].first)].push_back(s);
        ends[bucket(segments[s].second)].push_back(s);
    }
    auto neighbours = [&](cplx z, std::size_t self) {
        std::vector<std::size_t> res;
        const auto k = bucket(z);
        for (long long di = -1; di <= 1; ++di)
            for (long long dj = -1; dj <= 1; ++dj) {
                const auto it = ends.find({k.first + di, k.second + dj});
                if (it == ends.end()) continue;
                for (std::size_t s : it->second)
                    if (s != self && (std::abs(segments[s].first - z) < match_eps ||
                                      std::abs(segments[s].second - z) < match_eps))
                        res.push_back(s);
            }
        return res;
    };
    std::vector<char> used(segments.size(), 0);
    auto far_end = [&](std::size_t s, cplx from) {
        return std::abs(from - segments[s].first) < std::abs(from - segments[s].second)
                   ? segments[s].second
                   : segments[s].first;
    };
    auto walk = [&](std::size_t start, bool from_first) {
        std::vector<cplx> line;
        std::size_t s = start;
        cplx tail = from_first ? segments[s].first : segments[s].second;
        line.push_back(tail);
        while (true) {
            used[s] = 1;
            const cplx prev = tail;
            tail = far_end(s, tail);
            line.push_back(tail);
            const cplx heading = tail - prev;
            // at a branch point continue along the most parallel segment so
            // short spurs cannot derail the main contour
            std::size_t next = s;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t t : neighbours(tail, s)) {
                if (used[t]) continue;
                const cplx dir = far_end(t, tail) - tail;
                const double align = (heading * std::conj(dir)).real() /
                                     std::max(1e-300, std::abs(heading) * std::abs(dir));
                if (align > best) {
                    best = align;
                    next = t;
                }
            }
            if (next == s) break;
            s = next;
        }
        return line;
    };
    auto emit = [&](std::size_t s, bool from_first) {
        auto line = walk(s, from_first);
        const bool closed =
            line.size() > 2 && std::abs(line.front() - line.back()) < match_eps;
        out.components.push_back(std::move(line));
        out.closed.push_back(closed);
    };
    // open arcs first, started from a loose end so they come out whole
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        if (neighbours(segments[s].first, s).empty())
            emit(s, true);
        else if (neighbours(segments[s].second, s).empty())
            emit(s, false);
    }
    // whatever is left belongs to closed loops
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s]) emit(s, true);
    return out;
}

namespace {

DLAStepResult dla_core(const DiscreteMeasure& mu, double R, double dt, double noise,
                       std::mt19937_64* rng, std::size_t m) {
    if (R <= 0.0 || dt < 0.0 || m == 0) throw std::invalid_argument("dla_step: bad parameters");
    for (const auto& p : mu.points)
        if (std::abs(p) >= R) throw std::invalid_argument("dla_step: support not inside the seeding circle");
    DLAStepResult res;
    res.mu = mu;
    if (dt == 0.0) return res;

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> arrivals;
    const std::size_t budget = 20000;
    for (std::size_t k = 0; k < m; ++k) {
        cplx z = std::polar(R, 2.0 * pi * (double(k) + 0.5) / double(m));
        bool hit = false;
        for (std::size_t it = 0; it < budget; ++it) {
            const double dist = dist_to_support(mu, z);
            if (dist <= kSupportTube) {
                hit = true;
                break;
            }
            const cplx C = kernels::cauchy_sum(mu.points, mu.weights, z);
            const double ca = std::abs(C);
            if (ca < 1e-14) break;  // stagnation point
            const double ds = std::clamp(0.5 * (dist - 0.5 * kSupportTube), 0.5 * kSupportTube, 0.1);
            z += -std::conj(C) / ca * ds;
            if (noise > 0.0) z += noise * std::sqrt(ds) * cplx(gauss(*rng), gauss(*rng));
        }
        if (hit)
            arrivals.push_back(z);
        else
            ++res.dropped;
    }
    res.arrived = arrivals.size();
    if (!arrivals.empty()) {
        const double w = dt / double(arrivals.size());
        for (const auto& a : arrivals) {
            res.mu.points.push_back(a);
            res.mu.weights.push_back(w);
        }
    }
    return res;
}

} // namespace

DLAStepResult deterministic_dla_step(const DiscreteMeasure& mu, double R, double dt,
                                     std::size_t m) {
    return dla_core(mu, R, dt, 0.0, nullptr, m);
}

DLAStepResult ito_dla_step(const DiscreteMeasure& mu, double R, double dt, double noise,
                           std::mt19937_64& rng, std::size_t m) {
    if (noise < 0.0) throw std::invalid_argument("ito_dla_step: noise must be >= 0");
    if (noise == 0.0) return dla_core(mu, R, dt, 0.0, nullptr, m);
    return dla_core(mu, R, dt, noise, &rng, m);
}

} // namespace laplab
