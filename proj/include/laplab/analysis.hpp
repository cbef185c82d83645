#pragma once

#include "laplab/polymap.hpp"

#include <span>

namespace laplab {

// Cross-run diagnostics: fractal dimension of point clouds and distances
// between boundary trajectories.

struct DimensionFit {
    double dimension;
    double r_squared;
    std::vector<double> scales;     // box sizes used
    std::vector<double> counts;     // occupied boxes per scale
    std::vector<double> residuals;  // log-log fit residuals
};

// Least-squares slope of log N(h) against log(1/h). Needs at least 1000
// points and 4 scales spanning two decades.
DimensionFit box_counting_dimension(std::span<const cplx> points, std::span<const double> scales);

// max(sup_a inf_b, sup_b inf_a) over the two point sets.
double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

struct BoundarySnapshot {
    double t = 0.0;
    std::vector<cplx> points;
    std::vector<double> moments;  // optional diagnostics, matched lengths
};

struct CompareReport {
    std::vector<double> times;
    std::vector<double> hausdorff;
    std::vector<double> moment_gap;  // max absolute moment difference, 0 if absent
    double max_hausdorff = 0.0;
};

// Evaluates the Hausdorff distance at every time of `a` inside the common
// range; `b` is interpolated linearly between its bracketing snapshots when
// the sampling sizes match, otherwise the nearer snapshot is used. Throws
// on disjoint time ranges.
CompareReport compare_trajectories(std::span<const BoundarySnapshot> a,
                                   std::span<const BoundarySnapshot> b);

} // namespace laplab
