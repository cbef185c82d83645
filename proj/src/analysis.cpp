#include "laplab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace laplab {

DimensionFit box_counting_dimension(std::span<const cplx> points,
                                    std::span<const double> scales) {
    if (points.size() < 1000)
        throw std::invalid_argument("box_counting_dimension: need at least 1000 points");
    if (scales.size() < 4)
        throw std::invalid_argument("box_counting_dimension: need at least 4 scales");
    double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
    for (double h : scales) {
        if (!(h > 0.0)) throw std::invalid_argument("box_counting_dimension: scales must be > 0");
        smin = std::min(smin, h);
        smax = std::max(smax, h);
    }
    if (smax < 100.0 * smin)
        throw std::invalid_argument("box_counting_dimension: scales must span two decades");

    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    for (cplx p : points) {
        x0 = std::min(x0, p.real());
        y0 = std::min(y0, p.imag());
    }

    DimensionFit fit;
    fit.scales.assign(scales.begin(), scales.end());
    std::sort(fit.scales.begin(), fit.scales.end());
    for (double h : fit.scales) {
        std::unordered_set<std::uint64_t> boxes;
        for (cplx p : points) {
            const auto ix = std::uint64_t((p.real() - x0) / h);
            const auto iy = std::uint64_t((p.imag() - y0) / h);
            boxes.insert((ix << 32) | (iy & 0xffffffffu));
        }
        fit.counts.push_back(double(boxes.size()));
    }

    // least squares of log N on {1, log(1/h)}
    const std::size_t m = fit.scales.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs(m), ys(m);
    for (std::size_t k = 0; k < m; ++k) {
        xs[k] = -std::log(fit.scales[k]);
        ys[k] = std::log(fit.counts[k]);
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double denom = double(m) * sxx - sx * sx;
    fit.dimension = (double(m) * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.dimension * sx) / double(m);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double r = ys[k] - (intercept + fit.dimension * xs[k]);
        fit.residuals.push_back(r);
        ss_res += r * r;
        ss_tot += (ys[k] - sy / double(m)) * (ys[k] - sy / double(m));
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_distance: empty point set");
    auto one_sided = [](std::span<const cplx> from, std::span<const cplx> to) {
        double worst = 0.0;
        for (cplx p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (cplx q : to) best = std::min(best, std::norm(p - q));
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

CompareReport compare_trajectories(std::span<const BoundarySnapshot> a,
                                   std::span<const BoundarySnapshot> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("compare_trajectories: empty trajectory");
    const double lo = std::max(a.front().t, b.front().t);
    const double hi = std::min(a.back().t, b.back().t);
    if (lo > hi) throw std::invalid_argument("compare_trajectories: disjoint time ranges");

    CompareReport rep;
    const double slack = 1e-12 * std::max(1.0, std::abs(hi));
    for (const auto& snap : a) {
        if (snap.t < lo - slack || snap.t > hi + slack) continue;
        // bracketing snapshots of b
        std::size_t j = 1;
        while (j + 1 < b.size() && b[j].t < snap.t) ++j;
        const auto& bl = b[j - 1];
        const auto& br = b[j];
        const double span = br.t - bl.t;
        const double s = span > 0.0 ? std::clamp((snap.t - bl.t) / span, 0.0, 1.0) : 0.0;

        std::vector<cplx> interp;
        std::vector<double> mom;
        if (bl.points.size() == br.points.size()) {
            interp.resize(bl.points.size());
            for (std::size_t k = 0; k < interp.size(); ++k)
                interp[k] = (1.0 - s) * bl.points[k] + s * br.points[k];
        } else {
            interp = (s < 0.5 ? bl : br).points;
        }
        if (bl.moments.size() == br.moments.size() && !bl.moments.empty()) {
            mom.resize(bl.moments.size());
            for (std::size_t k = 0; k < mom.size(); ++k)
                mom[k] = (1.0 - s) * bl.moments[k] + s * br.moments[k];
        }

        rep.times.push_back(snap.t);
        rep.hausdorff.push_back(hausdorff_distance(snap.points, interp));
        double gap = 0.0;
        if (mom.size() == snap.moments.size())
            for (std::size_t k = 0; k < mom.size(); ++k)
                gap = std::max(gap, std::abs(mom[k] - snap.moments[k]));
        rep.moment_gap.push_back(gap);
        rep.max_hausdorff = std::max(rep.max_hausdorff, rep.hausdorff.back());
    }
    if (rep.times.empty())
        throw std::invalid_argument("compare_trajectories: no snapshots in the common range");
    return rep;
}

} // namespace laplab
