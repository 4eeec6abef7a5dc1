#include "pathcalc/crossings.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"

namespace pathcalc {

std::vector<double> observation_sequence(const Path& path, double t) {
    if (path.dim() != 1) throw ContractError("crossings need a 1-d path");
    if (!(t >= 0.0 && t <= path.horizon())) throw DomainError("t outside [0, T]");
    std::vector<double> seq;
    for (std::size_t k = 0; k < path.size() && path.time(k) <= t; ++k) {
        seq.push_back(path.value(k, 0));
    }
    if (path.mode() == Interp::Linear) {
        const double st = path.eval(t, 0);
        if (path.time(path.segment(t)) != t) seq.push_back(st);
    }
    return seq;
}

CrossingCount count_crossings(std::span<const double> seq, double a, double b) {
    if (!(a < b)) throw ContractError("crossings need a < b");
    CrossingCount c;
    bool below = false;  // up: seen a value <= a since the last completed upcrossing
    bool above = false;  // down: seen a value >= b since the last completed downcrossing
    for (double x : seq) {
        if (below && x >= b) {
            ++c.up;
            below = false;
        }
        if (above && x <= a) {
            ++c.down;
            above = false;
        }
        if (x <= a) below = true;
        if (x >= b) above = true;
    }
    return c;
}

CrossingCount crossings(const Path& path, double a, double b, double t) {
    if (!(a < b)) throw ContractError("crossings need a < b");
    const auto seq = observation_sequence(path, t);
    return count_crossings(seq, a, b);
}

AccumulatedCrossings accumulated_crossings(std::span<const double> seq, double h,
                                           std::vector<std::int64_t>* cumulative_up) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ContractError("interval width must be positive");
    AccumulatedCrossings out;
    out.h = h;
    if (seq.empty()) return out;
    const auto [mn, mx] = std::minmax_element(seq.begin(), seq.end());
    const auto k_lo = static_cast<std::int64_t>(std::floor(*mn / h)) - 1;
    const auto k_hi = static_cast<std::int64_t>(std::ceil(*mx / h)) + 1;
    const auto width = static_cast<std::size_t>(k_hi - k_lo + 1);
    // armed_up[k]: a value <= k h was seen after the last upcrossing of k
    std::vector<char> armed_up(width, 0), armed_down(width, 0);
    std::vector<std::int64_t> ups(width, 0), downs(width, 0);
    auto lower = [&](std::int64_t k) { return static_cast<double>(k) * h; };
    auto upper = [&](std::int64_t k) { return static_cast<double>(k + 1) * h; };
    auto idx = [&](std::int64_t k) { return static_cast<std::size_t>(k - k_lo); };

    std::int64_t running_up = 0;
    if (cumulative_up) cumulative_up->assign(1, 0);
    const double x0 = seq[0];
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        if (x0 <= lower(k)) armed_up[idx(k)] = 1;
        if (x0 >= upper(k)) armed_down[idx(k)] = 1;
    }
    for (std::size_t s = 1; s < seq.size(); ++s) {
        const double x = seq[s - 1];
        const double y = seq[s];
        if (y > x) {
            // intervals whose upper end lies in (x, y] complete an upcrossing
            std::int64_t k = static_cast<std::int64_t>(std::floor(x / h)) - 2;
            for (; upper(k) <= y; ++k) {
                if (upper(k) <= x || k < k_lo || k > k_hi) continue;
                if (armed_up[idx(k)]) {
                    ++ups[idx(k)];
                    ++running_up;
                    armed_up[idx(k)] = 0;
                }
                armed_down[idx(k)] = 1;
            }
        } else if (y < x) {
            std::int64_t k = static_cast<std::int64_t>(std::ceil(x / h)) + 2;
            for (; lower(k) >= y; --k) {
                if (lower(k) >= x || k < k_lo || k > k_hi) continue;
                if (armed_down[idx(k)]) {
                    ++downs[idx(k)];
                    armed_down[idx(k)] = 0;
                }
                armed_up[idx(k)] = 1;
            }
        }
        if (cumulative_up) cumulative_up->push_back(running_up);
    }
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const std::size_t i = idx(k);
        out.up += ups[i];
        out.down += downs[i];
        if (ups[i] != 0 || downs[i] != 0) out.per_interval.push_back({k, ups[i], downs[i]});
    }
    return out;
}

double segment_root(double t0, double v0, double t1, double v1, double level) {
    if (level == v0) return t0;
    if (level == v1) return t1;
    const double tau = t0 + (level - v0) / (v1 - v0) * (t1 - t0);
    return std::clamp(tau, t0, t1);
}

std::vector<Observation> refined_observations(const Path& path, std::span<const double> levels) {
    if (path.dim() != 1) throw ContractError("observations need a 1-d path");
    std::vector<Observation> out;
    for (std::size_t e = 0; e < path.size(); ++e) {
        const double t0 = path.time(e);
        const double v0 = path.value(e, 0);
        out.push_back({t0, v0});
        if (path.mode() == Interp::Step || e + 1 == path.size()) continue;
        const double t1 = path.time(e + 1);
        const double v1 = path.value(e + 1, 0);
        if (v0 == v1) continue;
        const double lo = std::min(v0, v1);
        const double hi = std::max(v0, v1);
        auto first = std::upper_bound(levels.begin(), levels.end(), lo);
        auto last = std::lower_bound(levels.begin(), levels.end(), hi);
        std::vector<Observation> inner;
        for (auto it = first; it != last; ++it) {
            const double tau = segment_root(t0, v0, t1, v1, *it);
            if (tau > t0 && tau < t1) inner.push_back({tau, *it});
        }
        if (v1 < v0) std::reverse(inner.begin(), inner.end());
        for (const auto& o : inner) {
            if (o.t > out.back().t) out.push_back(o);
        }
    }
    return out;
}

AccumulatedCrossings crossings_accumulated(const Path& path, double h, double t) {
    if (!(h > 0.0)) throw ContractError("interval width must be positive");
    const auto seq = observation_sequence(path, t);
    auto out = accumulated_crossings(seq, h);
    out.t = t;
    return out;
}

}  // namespace pathcalc
