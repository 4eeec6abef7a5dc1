#pragma once

#include <cstdint>
#include <vector>

#include "pathcalc/path.hpp"

namespace pathcalc {

inline constexpr int kMaxGeneration = 52;

/// Realized Lebesgue partition of one generation. For one-dimensional input
/// the tracked dyadic levels are kept as integers j (level = j * 2^-n).
struct LebesguePartition {
    int generation = 1;
    std::vector<double> times;
    std::vector<std::int64_t> level_index;  // empty for the d-dim union
    /// The recursion always stops on a finite-event path; kept for reports.
    bool finite = true;

    std::size_t size() const noexcept { return times.size(); }
    double level(std::size_t k) const;
    double mesh() const;
};

/// Definition of the dyadic Lebesgue partition for a 1-d path.
LebesguePartition lebesgue_partition_1d(const Path& path, int n);

/// Sorted union of the 1-d partitions of every coordinate and every pairwise
/// coordinate sum. For d = 1 this is lebesgue_partition_1d.
LebesguePartition lebesgue_partition_nd(const Path& path, int n);

/// Largest partition time <= t.
double chi(const LebesguePartition& coarser, double t);

/// True when every time of `coarse` also appears in `fine`.
bool is_nested(const LebesguePartition& coarse, const LebesguePartition& fine);

}  // namespace pathcalc
