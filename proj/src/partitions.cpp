#include "pathcalc/partitions.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"

namespace pathcalc {

namespace {

constexpr double kIndexLimit = 0x1.0p62;

void check_generation(int n) {
    if (n < 1 || n > kMaxGeneration) throw ContractError("generation must lie in [1, 52]");
}

double scaled(double v, int n) {
    const double s = std::ldexp(v, n);
    if (!(std::abs(s) < kIndexLimit)) throw ContractError("path value too large for generation");
    return s;
}

std::int64_t floor_index(double v, int n) {
    return static_cast<std::int64_t>(std::floor(scaled(v, n)));
}

std::int64_t ceil_index(double v, int n) {
    return static_cast<std::int64_t>(std::ceil(scaled(v, n)));
}

/// Dyadic level in [lo, hi] other than `skip` closest to v; ties to the
/// smaller level. Returns false when no such level exists.
bool closest_level(std::int64_t lo, std::int64_t hi, std::int64_t skip, double v, int n,
                   std::int64_t& out) {
    if (hi < lo || (lo == hi && lo == skip)) return false;
    const std::int64_t f = floor_index(v, n);
    const std::int64_t cands[] = {lo, hi, f, f + 1, skip - 1, skip + 1};
    bool found = false;
    double best = 0.0;
    for (std::int64_t c : cands) {
        if (c < lo || c > hi || c == skip) continue;
        const double dist = std::abs(std::ldexp(static_cast<double>(c), -n) - v);
        if (!found || dist < best || (dist == best && c < out)) {
            found = true;
            best = dist;
            out = c;
        }
    }
    return found;
}

LebesguePartition partition_step(const Path& path, int n) {
    LebesguePartition p;
    p.generation = n;
    p.times.push_back(0.0);
    double anchor = path.value(0, 0);
    std::int64_t level = floor_index(anchor, n);
    p.level_index.push_back(level);
    for (std::size_t e = 1; e < path.size(); ++e) {
        const double v = path.value(e, 0);
        const std::int64_t lo = ceil_index(std::min(anchor, v), n);
        const std::int64_t hi = floor_index(std::max(anchor, v), n);
        std::int64_t next = 0;
        if (!closest_level(lo, hi, level, v, n, next)) continue;
        p.times.push_back(path.time(e));
        p.level_index.push_back(next);
        anchor = v;
        level = next;
    }
    return p;
}

LebesguePartition partition_linear(const Path& path, int n) {
    LebesguePartition p;
    p.generation = n;
    p.times.push_back(0.0);
    std::int64_t level = floor_index(path.value(0, 0), n);
    p.level_index.push_back(level);
    for (std::size_t e = 0; e + 1 < path.size(); ++e) {
        const double t0 = path.time(e);
        const double t1 = path.time(e + 1);
        const double v0 = path.value(e, 0);
        const double v1 = path.value(e + 1, 0);
        if (v1 == v0) continue;
        const bool up = v1 > v0;
        for (;;) {
            const std::int64_t target = up ? level + 1 : level - 1;
            const double lv = std::ldexp(static_cast<double>(target), -n);
            if (up ? (lv > v1) : (lv < v1)) break;
            // root from the segment start so that a level shared by two
            // generations lands on the same time in both
            double tau;
            if (lv == v1) tau = t1;
            else if (lv == v0) tau = t0;
            else tau = t0 + (lv - v0) / (v1 - v0) * (t1 - t0);
            tau = std::min(tau, t1);
            if (!(tau > p.times.back())) tau = std::nextafter(p.times.back(), HUGE_VAL);
            p.times.push_back(tau);
            p.level_index.push_back(target);
            level = target;
        }
    }
    return p;
}

}  // namespace

double LebesguePartition::level(std::size_t k) const {
    if (k >= level_index.size()) throw ContractError("partition carries no level for this index");
    return std::ldexp(static_cast<double>(level_index[k]), -generation);
}

double LebesguePartition::mesh() const { return std::ldexp(1.0, -generation); }

LebesguePartition lebesgue_partition_1d(const Path& path, int n) {
    check_generation(n);
    if (path.dim() != 1) throw ContractError("lebesgue_partition_1d needs a 1-d path");
    return path.mode() == Interp::Step ? partition_step(path, n) : partition_linear(path, n);
}

LebesguePartition lebesgue_partition_nd(const Path& path, int n) {
    check_generation(n);
    if (path.dim() == 1) return lebesgue_partition_1d(path, n);
    std::vector<double> all;
    auto add = [&](const Path& p) {
        const auto part = lebesgue_partition_1d(p, n);
        all.insert(all.end(), part.times.begin(), part.times.end());
    };
    for (std::size_t i = 0; i < path.dim(); ++i) add(path.component(i));
    for (std::size_t i = 0; i < path.dim(); ++i) {
        for (std::size_t j = i + 1; j < path.dim(); ++j) add(path.coordinate_sum(i, j));
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    LebesguePartition p;
    p.generation = n;
    p.times = std::move(all);
    return p;
}

double chi(const LebesguePartition& coarser, double t) {
    if (!(t >= 0.0)) throw DomainError("chi needs t >= 0");
    const auto it = std::upper_bound(coarser.times.begin(), coarser.times.end(), t);
    return *(it - 1);
}

bool is_nested(const LebesguePartition& coarse, const LebesguePartition& fine) {
    return std::includes(fine.times.begin(), fine.times.end(), coarse.times.begin(),
                         coarse.times.end());
}

}  // namespace pathcalc
