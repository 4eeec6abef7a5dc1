#include "pathcalc/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/crossings.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/partitions.hpp"
#include "pathcalc/quadratic_variation.hpp"

namespace pathcalc {

StrategyRule zero_strategy(std::size_t dim) {
    return {"zero", {{"dim", dim}}, [dim](const Path&) { return RealizedStrategy::zero(dim); }};
}

StrategyRule buy_and_hold(const Vec& h) {
    return {"buy-and-hold", {{"position", h}},
            [h](const Path&) { return RealizedStrategy::constant(h); }};
}

double gamma_K(const Path& path, double K) {
    if (!(K > 0.0)) throw ContractError("K must be positive");
    const std::size_t d = path.dim();
    for (std::size_t e = 0; e < path.size(); ++e) {
        if (norm(path.value(e)) >= K) return path.time(e);
        if (path.mode() == Interp::Step || e + 1 == path.size()) continue;
        // |v0 + s (v1 - v0)|^2 = K^2 on s in (0, 1]
        double qa = 0.0, qb = 0.0, qc = -K * K;
        for (std::size_t i = 0; i < d; ++i) {
            const double v0 = path.value(e, i);
            const double dv = path.value(e + 1, i) - v0;
            qa += dv * dv;
            qb += 2.0 * v0 * dv;
            qc += v0 * v0;
        }
        if (qa == 0.0) continue;
        const double s = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
        if (s <= 1.0 || norm(path.value(e + 1)) >= K) {
            const double t0 = path.time(e);
            const double t1 = path.time(e + 1);
            return std::min(t1, t0 + std::clamp(s, 0.0, 1.0) * (t1 - t0));
        }
    }
    return kNever;
}

double rho_lambda(const RealizedStrategy& strategy, const Path& path, double lambda) {
    if (!(lambda > 0.0)) throw ContractError("lambda must be positive");
    const CapitalCurve curve = capital_curve(strategy, path);
    for (std::size_t g = 0; g < curve.times.size(); ++g) {
        if (curve.values[g] > -lambda) continue;
        if (g == 0 || path.mode() == Interp::Step) return curve.times[g];
        const double c0 = curve.values[g - 1];
        const double c1 = curve.values[g];
        const double t0 = curve.times[g - 1];
        const double t1 = curve.times[g];
        const double tau = t0 + (-lambda - c0) / (c1 - c0) * (t1 - t0);
        return std::clamp(tau, std::nextafter(t0, HUGE_VAL), t1);
    }
    return kNever;
}

AdmissibilityVerdict check_strong_admissibility(const RealizedStrategy& strategy,
                                                const Path& path, double lambda) {
    if (!(lambda > 0.0)) throw ContractError("lambda must be positive");
    const CapitalCurve curve = capital_curve(strategy, path);
    AdmissibilityVerdict v;
    for (std::size_t g = 0; g < curve.times.size(); ++g) {
        if (curve.values[g] < v.min_capital) {
            v.min_capital = curve.values[g];
            v.worst_time = curve.times[g];
        }
    }
    v.slack = v.min_capital + lambda;
    v.pass = v.min_capital >= -lambda;
    if (!v.pass) v.reason = "capital below -lambda";
    return v;
}

AdmissibilityVerdict check_weak_admissibility(const RealizedStrategy& strategy,
                                              const Path& path, double lambda) {
    if (!(lambda > 0.0)) throw ContractError("lambda must be positive");
    const double rho = rho_lambda(strategy, path, lambda);
    const std::vector<double> extra = is_never(rho) ? std::vector<double>{} : std::vector<double>{rho};
    const CapitalCurve curve = capital_curve(strategy, path, extra);
    const double after = is_never(rho) ? 0.0 : norm(path.eval(rho));
    AdmissibilityVerdict v;
    v.slack = HUGE_VAL;
    for (std::size_t g = 0; g < curve.times.size(); ++g) {
        const double t = curve.times[g];
        const double bound = (!is_never(rho) && t >= rho) ? -lambda * (1.0 + after) : -lambda;
        const double c = curve.values[g];
        if (c < v.min_capital) v.min_capital = c;
        if (c - bound < v.slack) {
            v.slack = c - bound;
            v.worst_time = t;
        }
    }
    v.pass = v.slack >= 0.0;
    if (!v.pass) v.reason = "capital below the weak bound";
    if (!is_never(rho)) {
        for (std::size_t k = 0; k < strategy.size(); ++k) {
            const double next = k + 1 < strategy.size() ? strategy.times[k + 1] : kNever;
            if (!(next > rho) || !(strategy.times[k] < path.horizon())) continue;
            const auto h = strategy.position(k);
            if (std::any_of(h.begin(), h.end(), [](double x) { return x != 0.0; })) {
                v.pass = false;
                v.reason = "trading continues after rho_lambda";
                v.worst_time = std::max(strategy.times[k], rho);
                break;
            }
        }
    }
    return v;
}

namespace {

template <class Check>
std::vector<AdmissibilityVerdict> check_all(const StrategyRule& rule, std::span<const Path> paths,
                                            double lambda, Check check) {
    std::vector<AdmissibilityVerdict> out(paths.size());
    parallel_for(paths.size(), [&](std::size_t i) {
        out[i] = check(rule(paths[i]), paths[i], lambda);
    });
    return out;
}

RealizedStrategy from_changes(std::size_t dim, const std::vector<Observation>& trades_t,
                              const std::vector<double>& trades_h) {
    RealizedStrategy s{dim, {}, {}};
    for (std::size_t k = 0; k < trades_t.size(); ++k) {
        s.append(trades_t[k].t, std::span<const double>(&trades_h[k], 1));
    }
    if (s.times.empty()) return RealizedStrategy::zero(dim);
    return s;
}

}  // namespace

std::vector<AdmissibilityVerdict> check_strong_admissibility(const StrategyRule& rule,
                                                             std::span<const Path> paths,
                                                             double lambda) {
    return check_all(rule, paths, lambda,
                     [](const RealizedStrategy& s, const Path& p, double l) {
                         return check_strong_admissibility(s, p, l);
                     });
}

std::vector<AdmissibilityVerdict> check_weak_admissibility(const StrategyRule& rule,
                                                           std::span<const Path> paths,
                                                           double lambda) {
    return check_all(rule, paths, lambda,
                     [](const RealizedStrategy& s, const Path& p, double l) {
                         return check_weak_admissibility(s, p, l);
                     });
}

StrategyRule doob_interval_strategy(double a, double b, double K, const PsiSpec& psi) {
    if (!(a < b)) throw ContractError("doob interval needs a < b");
    if (!(K > 0.0)) throw ContractError("K must be positive");
    return {"doob-interval",
            {{"a", a}, {"b", b}, {"K", K}, {"psi", psi.to_string()}},
            [a, b, K](const Path& path) {
                if (path.dim() != 1) throw ContractError("doob strategy needs a 1-d path");
                const double levels[] = {a, b};
                const auto obs = refined_observations(path, levels);
                const double stop = gamma_K(path, K);
                std::vector<Observation> when;
                std::vector<double> what;
                bool holding = false;
                for (const auto& o : obs) {
                    if (!(o.t < stop)) break;
                    // a single observation cannot be both <= a and >= b
                    if (!holding && o.v <= a) {
                        holding = true;
                        when.push_back(o);
                        what.push_back(1.0);
                    } else if (holding && o.v >= b) {
                        holding = false;
                        when.push_back(o);
                        what.push_back(0.0);
                    }
                }
                return from_changes(1, when, what).stopped_at(stop);
            }};
}

double doob_aggregate_weight(int n, double K, const PsiSpec& psi) {
    return 1.0 / (K * std::ldexp(1.0, n + 1) * (2.0 * K + psi(K)));
}

namespace {

struct DyadicRange {
    std::int64_t lo, hi;  // intervals k with k h > -K and (k+1) h < K
};

DyadicRange dyadic_range(int n, double K) {
    const double h = std::ldexp(1.0, -n);
    auto lo = static_cast<std::int64_t>(std::floor(-K / h));
    while (static_cast<double>(lo) * h <= -K) ++lo;
    auto hi = static_cast<std::int64_t>(std::ceil(K / h));
    while (static_cast<double>(hi + 1) * h >= K) --hi;
    return {lo, hi};
}

}  // namespace

StrategyRule doob_aggregate(int n, double K, const PsiSpec& psi) {
    if (n < 0 || n > kMaxGeneration) throw ContractError("n must lie in [0, 52]");
    if (!(K > 0.0)) throw ContractError("K must be positive");
    const double w = doob_aggregate_weight(n, K, psi);
    return {"doob-aggregate",
            {{"n", n}, {"K", K}, {"psi", psi.to_string()}, {"weight", w}},
            [n, K, w](const Path& path) {
                if (path.dim() != 1) throw ContractError("doob strategy needs a 1-d path");
                const double h = std::ldexp(1.0, -n);
                const auto range = dyadic_range(n, K);
                std::vector<double> levels;
                for (std::int64_t k = range.lo; k <= range.hi + 1; ++k) {
                    levels.push_back(static_cast<double>(k) * h);
                }
                const auto obs = refined_observations(path, levels);
                const double stop = gamma_K(path, K);
                const std::size_t width =
                    range.hi >= range.lo ? static_cast<std::size_t>(range.hi - range.lo + 1) : 0;
                std::vector<char> holding(width, 0);
                std::int64_t count = 0;
                std::vector<Observation> when;
                std::vector<double> what;
                for (const auto& o : obs) {
                    if (!(o.t < stop)) break;
                    const std::int64_t before = count;
                    for (std::size_t i = 0; i < width; ++i) {
                        const auto k = range.lo + static_cast<std::int64_t>(i);
                        const double a = static_cast<double>(k) * h;
                        const double b = static_cast<double>(k + 1) * h;
                        if (!holding[i] && o.v <= a) {
                            holding[i] = 1;
                            ++count;
                        } else if (holding[i] && o.v >= b) {
                            holding[i] = 0;
                            --count;
                        }
                    }
                    if (count != before || when.empty()) {
                        when.push_back(o);
                        what.push_back(w * static_cast<double>(count));
                    }
                }
                return from_changes(1, when, what).stopped_at(stop);
            }};
}

std::vector<double> doob_aggregate_lower_bound(const Path& path, int n, double K,
                                               const PsiSpec& psi,
                                               std::span<const double> times) {
    const double h = std::ldexp(1.0, -n);
    const auto range = dyadic_range(n, K);
    std::vector<double> levels;
    for (std::int64_t k = range.lo - 1; k <= range.hi + 2; ++k) {
        levels.push_back(static_cast<double>(k) * h);
    }
    const auto obs = refined_observations(path, levels);
    std::vector<double> seq;
    seq.reserve(obs.size());
    for (const auto& o : obs) seq.push_back(o.v);
    std::vector<std::int64_t> cum;
    accumulated_crossings(seq, h, &cum);
    const double c = 1.0 / (2.0 * K * (2.0 * K + psi(K))) * std::ldexp(1.0, -2 * n);
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        const auto it = std::upper_bound(obs.begin(), obs.end(), t,
                                         [](double x, const Observation& o) { return x < o.t; });
        const auto idx = static_cast<std::size_t>(it - obs.begin()) - 1;
        out.push_back(c * static_cast<double>(cum[idx]));
    }
    return out;
}

double vovk_budget(double lambda, std::size_t dim, double K, const PsiSpec& psi) {
    const double d = static_cast<double>(dim);
    return lambda * (1.0 + 3.0 * d * K + 2.0 * d * psi(K));
}

StrategyRule vovk_lift(const StrategyRule& G, double lambda, double K, const PsiSpec& psi) {
    if (!(lambda > 0.0)) throw ContractError("lambda must be positive");
    if (!(K > 0.0)) throw ContractError("K must be positive");
    return {"vovk-lift",
            {{"inner", G.descriptor()}, {"lambda", lambda}, {"K", K}, {"psi", psi.to_string()}},
            [G, lambda, K](const Path& path) {
                const RealizedStrategy g = G(path);
                const double rho = rho_lambda(g, path, lambda);
                const double gamma = gamma_K(path, K);
                const RealizedStrategy cash =
                    RealizedStrategy::constant(Vec(path.dim(), lambda)).stopped_at(std::min(rho, gamma));
                return combine(1.0, cash, 1.0, g.stopped_at(gamma)).compacted();
            }};
}

LStrategyResult l_strategy(const Path& path, int n, double K, const PsiSpec& psi, double tol) {
    if (path.dim() != 1) throw ContractError("l_strategy needs a 1-d path");
    if (n < 2) throw ContractError("l_strategy needs n >= 2 (it uses pi_{n-1})");
    if (!(K > 0.0)) throw ContractError("K must be positive");
    const ZProcess z(path, n);
    const auto& fine = z.fine().times;
    const auto& coarse = z.coarse()->times;

    LStrategyResult r;
    r.nested = is_nested(*z.coarse(), z.fine());
    r.stop_time = std::min(gamma_K(path, K), z.sigma(K));

    RealizedStrategy L{1, {}, {}};
    for (std::size_t k = 0; k < fine.size(); ++k) {
        if (!(fine[k] < r.stop_time)) break;
        const double tau = fine[k];
        const double h = -4.0 * z.z_at(k) * (path.eval(tau, 0) - path.eval(chi(*z.coarse(), tau), 0));
        L.append(tau, std::span<const double>(&h, 1));
    }
    if (L.times.empty()) L = RealizedStrategy::zero(1);
    L = L.stopped_at(r.stop_time);

    std::vector<double> stop_list;
    if (r.stop_time <= path.horizon()) stop_list.push_back(r.stop_time);
    const auto grid = merge_times({path.times(), fine, coarse, stop_list}, path.horizon());
    const double base = ZProcess::k_constant(n, K, psi);
    CapitalEvaluator cap(L, path);
    for (double t : grid) {
        const double lhs = z.k_process(K, psi, std::min(r.stop_time, t));
        const double rhs = base + cap(t);
        r.max_error = std::max(r.max_error, std::abs(lhs - rhs));
    }
    r.grid_points = grid.size();
    r.strategy = std::move(L);
    if (!(r.max_error <= tol)) {
        throw InternalConsistencyError("L^{K,n} identity off by " + std::to_string(r.max_error) +
                                       (r.nested ? "" : " (partitions not nested)"));
    }
    return r;
}

}  // namespace pathcalc
