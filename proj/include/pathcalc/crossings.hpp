#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pathcalc/path.hpp"

namespace pathcalc {

struct CrossingCount {
    std::int64_t up = 0;
    std::int64_t down = 0;
    friend bool operator==(const CrossingCount&, const CrossingCount&) = default;
};

/// Values that decide crossings on [0, t]: event values up to t, plus S_t in
/// linear mode (extremes of a piecewise-linear path sit at its vertices).
std::vector<double> observation_sequence(const Path& path, double t);

/// Greedy count on a finite sequence; attains the supremum over disjoint
/// ordered pairs.
CrossingCount count_crossings(std::span<const double> seq, double a, double b);

/// Up- and downcrossings of (a, b) by the 1-d path on [0, t].
CrossingCount crossings(const Path& path, double a, double b, double t);

struct IntervalCrossings {
    std::int64_t k = 0;  // interval (k h, (k+1) h)
    std::int64_t up = 0;
    std::int64_t down = 0;
};

struct AccumulatedCrossings {
    double h = 0.0;
    double t = 0.0;
    std::int64_t up = 0;
    std::int64_t down = 0;
    std::vector<IntervalCrossings> per_interval;  // only intervals with a crossing
};

/// Per-interval counts for the grid of width h on a sequence, in one sweep
/// costing O(len + total variation / h). When cumulative_up is given it
/// receives the running total of upcrossings after each element.
AccumulatedCrossings accumulated_crossings(std::span<const double> seq, double h,
                                           std::vector<std::int64_t>* cumulative_up = nullptr);

struct Observation {
    double t;
    double v;
};

/// Events of a 1-d path, plus in linear mode the exact times at which each
/// of the sorted `levels` is hit inside a segment (value set to the level).
/// Every level crossing of the path is then visible in the returned list.
std::vector<Observation> refined_observations(const Path& path, std::span<const double> levels);

/// Exact time at which the segment from (t0, v0) to (t1, v1) hits `level`.
double segment_root(double t0, double v0, double t1, double v1, double level);

/// U_t(f, h) and D_t(f, h): crossings summed over all intervals (kh, (k+1)h).
AccumulatedCrossings crossings_accumulated(const Path& path, double h, double t);

}  // namespace pathcalc
