#include "pathcalc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "pathcalc/bdg.hpp"
#include "pathcalc/crossings.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/experiments.hpp"
#include "pathcalc/hoeffding.hpp"
#include "pathcalc/integration.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/quadratic_variation.hpp"
#include "pathcalc/rng.hpp"
#include "pathcalc/simulate.hpp"
#include "pathcalc/strategies.hpp"

namespace pathcalc {

namespace {

using nlohmann::json;

std::size_t pick(const VerifyOptions& o, std::size_t fallback) {
    return o.count > 0 ? o.count : fallback;
}

template <class T>
T total(const std::vector<T>& v) {
    return std::accumulate(v.begin(), v.end(), T{});
}

double largest(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

CheckResult check_bdg(const VerifyOptions& o) {
    const std::size_t count = pick(o, 100000);
    std::vector<int> bad(count, 0), zero_start(count, 0);
    parallel_for(count, [&](std::size_t i) {
        PhiloxStream rng(o.seed, i);
        const auto x = random_bdg_sequence(rng, 200);
        bad[i] = bdg_check(x).holds ? 0 : 1;
        zero_start[i] = x[0] == 0.0 ? 1 : 0;
    });
    const int violations = total(bad);
    return {"bdg", violations == 0,
            {{"sequences", count}, {"violations", violations}, {"zero_start_cases", total(zero_start)}}};
}

CheckResult check_k_identity(const VerifyOptions& o) {
    const std::size_t count = pick(o, 1000);
    const std::vector<double> Ks{1.0, 2.0, 4.0};
    std::vector<double> err(count, 0.0);
    std::vector<int> not_nested(count, 0);
    parallel_for(count, [&](std::size_t i) {
        PhiloxStream rng(o.seed, i);
        const Path p = random_step_path(rng, 40, 0.4);
        for (int n = 2; n <= 8; ++n) {
            for (double K : Ks) {
                const auto r = l_strategy(p, n, K, o.psi, 1e-9);
                err[i] = std::max(err[i], r.max_error);
                not_nested[i] += r.nested ? 0 : 1;
            }
        }
    });
    return {"k_identity", true,
            {{"paths", count},
             {"generations", {2, 8}},
             {"K", Ks},
             {"tol", 1e-9},
             {"max_abs_error", largest(err)},
             {"non_nested_cases", total(not_nested)}}};
}

CheckResult check_doob(const VerifyOptions& o) {
    const std::size_t count = pick(o, 1000);
    const std::vector<double> Ks{1.0, 2.0};
    std::vector<int> bound_fail(count, 0), adm_fail(count, 0);
    std::vector<double> worst(count, kNever);
    parallel_for(count, [&](std::size_t i) {
        PhiloxStream rng(o.seed, i);
        for (double K : Ks) {
            const Path p = random_bounded_path(rng, 1 + rng.next_u32() % 60, K, o.psi);
            for (int n = 1; n <= 4; ++n) {
                const auto H = doob_aggregate(n, K, o.psi)(p);
                const auto curve = capital_curve(H, p);
                const auto lb = doob_aggregate_lower_bound(p, n, K, o.psi, curve.times);
                for (std::size_t k = 0; k < curve.times.size(); ++k) {
                    const double slack = 1.0 + curve.values[k] - lb[k];
                    worst[i] = std::min(worst[i], slack);
                    if (slack < 0.0) ++bound_fail[i];
                }
                if (!check_strong_admissibility(H, p, 1.0).pass) ++adm_fail[i];
            }
        }
    });
    const int bf = total(bound_fail), af = total(adm_fail);
    return {"doob", bf == 0 && af == 0,
            {{"paths", count * Ks.size()},
             {"generations", {1, 4}},
             {"K", Ks},
             {"bound_violations", bf},
             {"admissibility_failures", af},
             {"min_slack", *std::min_element(worst.begin(), worst.end())}}};
}

CheckResult check_hoeffding(const VerifyOptions& o) {
    const std::size_t count = pick(o, 1000);
    const std::vector<double> lambdas{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    std::vector<int> fails(count, 0), step_fails(count, 0);
    std::vector<double> worst(count, kNever);
    const auto base = buy_and_hold({1.0});
    parallel_for(count, [&](std::size_t i) {
        PhiloxStream rng(o.seed, i);
        const Path p = random_walk_path(rng, 1 + rng.next_u32() % 100, 1.0);
        for (double lambda : lambdas) {
            const auto r = hoeffding_strategy(base(p), p, {lambda, 1.0, DecisionRule::EveryEvent});
            fails[i] += static_cast<int>(r.guarantee_failures);
            step_fails[i] += static_cast<int>(r.bound_violations);
            worst[i] = std::min(worst[i], r.worst_slack);
        }
    });
    const int f = total(fails), s = total(step_fails);
    return {"hoeffding", f == 0 && s == 0,
            {{"paths", count},
             {"lambda", lambdas},
             {"c", 1.0},
             {"violations", f},
             {"step_bound_violations", s},
             {"min_slack", *std::min_element(worst.begin(), worst.end())}}};
}

Path random_step_path_2d(PhiloxStream& rng, std::size_t max_events) {
    const Path a = random_step_path(rng, max_events, 1.0);
    std::vector<double> v;
    for (std::size_t k = 0; k < a.size(); ++k) {
        v.push_back(a.value(k, 0));
        v.push_back(rng.normal());
    }
    return Path(2, 1.0, std::vector<double>(a.times().begin(), a.times().end()), std::move(v),
                Interp::Step);
}

CheckResult check_purejump(const VerifyOptions& o) {
    const std::size_t count = pick(o, 1000);
    constexpr int kGen = 48;
    std::vector<double> err(count, 0.0);
    std::vector<int> bad(count, 0);
    parallel_for(count, [&](std::size_t idx) {
        PhiloxStream rng(o.seed, idx);
        const Path p = idx % 2 == 0 ? random_step_path(rng, 30, 1.0) : random_step_path_2d(rng, 30);
        const auto rep = qv_limit(p, kGen, 1e-12);
        const std::size_t d = p.dim();
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                double oracle = 0.0, scale = 0.0;
                for (std::size_t k = 1; k < p.size(); ++k) {
                    const double di = p.value(k, i) - p.value(k - 1, i);
                    const double dj = p.value(k, j) - p.value(k - 1, j);
                    oracle += di * dj;
                    scale += std::abs(di * dj);
                }
                const double e = std::abs(rep.limit_T(i, j) - oracle) / std::max(1.0, scale);
                err[idx] = std::max(err[idx], e);
            }
        }
        if (!(err[idx] <= 1e-12)) bad[idx] = 1;
        const auto jumps = jump_identity_check(p, rep, 1e-12);
        if (!jumps.pass) {
            throw InternalConsistencyError("jump identity off by " +
                                           std::to_string(jumps.max_discrepancy));
        }
    });
    const int b = total(bad);
    return {"purejump", b == 0,
            {{"paths", count},
             {"n_max", kGen},
             {"max_rel_error", largest(err)},
             {"mismatches", b},
             {"jump_identity", "exact"}}};
}

struct ItoCheck {
    double rel = 0.0;
    double I_T = 0.0;
};

ItoCheck ito_identity(const Path& p, int n) {
    const auto ito = ito_integral(left_limit_rule(), p, n, 0.0, n);
    const auto qv = qv_limit(p, n, 1e-12);
    const double s0 = p.eval(0.0, 0), sT = p.eval(p.horizon(), 0);
    const double I = ito.terminal.back();
    const double S = qv.limit_T(0, 0);
    const double den = S + std::abs(sT * sT - s0 * s0);
    ItoCheck c;
    c.I_T = I;
    c.rel = den > 0.0 ? std::abs(2.0 * I + S - (sT * sT - s0 * s0)) / den : 0.0;
    return c;
}

CheckResult check_ito(const VerifyOptions& o) {
    const std::size_t count = pick(o, 1000);
    std::vector<double> err(count, 0.0);
    parallel_for(count, [&](std::size_t i) {
        PhiloxStream rng(o.seed, i);
        err[i] = ito_identity(random_step_path(rng, 30, 1.0), 48).rel;
    });
    const std::size_t bcount = 8;
    std::vector<double> berr(bcount, 0.0);
    SimSpec settings;
    settings.kind = SimKind::Brownian;
    settings.steps = 1 << 12;
    settings.seed = o.seed;
    parallel_for(bcount, [&](std::size_t i) { berr[i] = ito_identity(simulate(settings, i), 10).rel; });
    const double step_err = largest(err), bm_err = largest(berr);
    if (step_err > 1e-12) {
        throw InternalConsistencyError("telescoping identity off by " + std::to_string(step_err));
    }
    return {"ito", bm_err <= 1e-2,
            {{"step_paths", count},
             {"step_max_rel_error", step_err},
             {"brownian_paths", bcount},
             {"brownian_n_max", 10},
             {"brownian_max_rel_error", bm_err}}};
}

CheckResult check_concentration(const VerifyOptions& o) {
    SimSpec settings;
    settings.kind = SimKind::Brownian;
    settings.steps = 4096;
    settings.seed = o.seed;
    const auto paths = ensemble(settings, pick(o, 10000));
    const double a = 3.0, b = 1.5 * settings.horizon;
    const auto r = concentration_check_continuous(constant_integrand({1.0}), paths, a, b, 4);
    return {"concentration", r.pass,
            {{"paths", r.count},
             {"a", a},
             {"b", b},
             {"n", 4},
             {"hits", r.hits},
             {"frequency", r.frequency},
             {"bound", r.bound},
             {"std_err", r.std_err}}};
}

SimSpec cadlag_settings(const VerifyOptions& o) {
    SimSpec settings;
    settings.kind = SimKind::JumpDiffusion;
    settings.steps = 200;
    settings.volatility = 0.3;
    settings.jump_intensity = 5.0;
    settings.jump_mean = 0.0;
    settings.jump_std = 0.2;
    settings.psi = o.psi;
    settings.seed = o.seed;
    return settings;
}

CheckResult check_cadlag_bdg(const VerifyOptions& o) {
    const auto paths = ensemble(cadlag_settings(o), pick(o, 10000));
    const double a = 100.0, b = 1.0, c = 1.0, M = 1.0;
    const auto r = bdg_bound_check_cadlag(constant_integrand({1.0}), paths, a, b, c, M, o.psi, 8, 12);
    return {"cadlag_bdg", r.frequency.pass,
            {{"paths", r.frequency.count},
             {"a", a},
             {"b", b},
             {"c", c},
             {"M", M},
             {"psi", o.psi.to_string()},
             {"hits", r.frequency.hits},
             {"frequency", r.frequency.frequency},
             {"bound", r.frequency.bound},
             {"std_err", r.frequency.std_err},
             {"pathwise_checks", r.pathwise_checks},
             {"pathwise_violations", 0},
             {"min_pathwise_slack", r.worst_pathwise_slack}}};
}

CheckResult check_qv_brownian(const VerifyOptions& o) {
    SimSpec settings;
    settings.kind = SimKind::Brownian;
    settings.steps = 1 << 16;
    settings.seed = o.seed;
    settings.mode = Interp::Step;
    const std::size_t count = pick(o, 100);
    std::vector<double> rel(count, 0.0);
    std::vector<int> z_drop(count, 0);
    parallel_for(count, [&](std::size_t i) {
        const Path p = simulate(settings, i);
        double rv = 0.0;
        for (std::size_t k = 1; k < p.size(); ++k) {
            const double dx = p.value(k, 0) - p.value(k - 1, 0);
            rv += dx * dx;
        }
        const auto rep = qv_limit(p, 10, 1e-12);
        rel[i] = std::abs(rep.limit_T(0, 0) - rv) / rv;
        z_drop[i] = rep.z_sup[9] < rep.z_sup[4] ? 1 : 0;
    });
    const double worst = largest(rel);
    const int drops = total(z_drop);
    const bool pass = worst <= 1e-2 && static_cast<double>(drops) >= 0.95 * static_cast<double>(count);
    return {"qv_brownian", pass,
            {{"paths", count},
             {"steps", settings.steps},
             {"mode", "step"},
             {"n", 10},
             {"max_rel_error", worst},
             {"z10_below_z5", drops}}};
}

// Exhaustive count: the largest number of ordered disjoint
// pairs (s_i < t_i) with f(s_i) <= a and f(t_i) >= b (or the reverse).
CrossingCount brute_crossings(const std::vector<double>& f, double a, double b) {
    const std::size_t m = f.size();
    CrossingCount best;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < m; ++k) {
            if (mask & (1u << k)) idx.push_back(k);
        }
        if (idx.size() % 2 != 0) continue;
        bool up = true, down = true;
        for (std::size_t k = 0; k < idx.size(); k += 2) {
            up = up && f[idx[k]] <= a && f[idx[k + 1]] >= b;
            down = down && f[idx[k]] >= b && f[idx[k + 1]] <= a;
        }
        const auto pairs = static_cast<std::int64_t>(idx.size() / 2);
        if (up) best.up = std::max(best.up, pairs);
        if (down) best.down = std::max(best.down, pairs);
    }
    return best;
}

CheckResult check_crossings(const VerifyOptions& o) {
    const std::size_t count = pick(o, 10000);
    std::vector<int> bad(count, 0);
    parallel_for(count, [&](std::size_t i) {
        PhiloxStream rng(o.seed, i);
        const Path p = random_step_path(rng, 7, 1.0);
        double a = rng.normal(), b = rng.normal();
        if (a > b) std::swap(a, b);
        if (a == b) b = a + 0.5;
        std::vector<double> f(p.values().begin(), p.values().end());
        bad[i] = crossings(p, a, b, p.horizon()) == brute_crossings(f, a, b) ? 0 : 1;
    });
    const int b = total(bad);
    return {"crossings", b == 0, {{"instances", count}, {"max_events", 8}, {"mismatches", b}}};
}

CheckResult check_continuity(const VerifyOptions& o) {
    const std::size_t count = pick(o, 400);
    SimSpec bm;
    bm.kind = SimKind::Brownian;
    bm.steps = 1024;
    bm.seed = o.seed;
    ContinuityParams cp;
    cp.kind = ContinuityCase::Continuous;
    const auto cont = continuity_experiment(ensemble(bm, count), cp);

    ContinuityParams jp;
    jp.kind = ContinuityCase::Cadlag;
    jp.metric.psi = o.psi;
    SimSpec js = cadlag_settings(o);
    const auto jump = continuity_experiment(ensemble(js, count), jp);
    return {"continuity", cont.pass && jump.pass,
            {{"paths", count},
             {"continuous_slope", cont.slope},
             {"continuous_threshold", cont.exponent - cont.slack},
             {"cadlag_slope", jump.slope},
             {"cadlag_threshold", jump.exponent - jump.slack}}};
}

}  // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{
        "bdg",           "k_identity", "doob",        "hoeffding", "purejump",  "ito",
        "concentration", "cadlag_bdg", "qv_brownian", "crossings", "continuity"};
    return names;
}

CheckResult run_check(const std::string& name, const VerifyOptions& o) {
    using Fn = CheckResult (*)(const VerifyOptions&);
    static const std::vector<std::pair<std::string, Fn>> table{
        {"bdg", check_bdg},
        {"k_identity", check_k_identity},
        {"doob", check_doob},
        {"hoeffding", check_hoeffding},
        {"purejump", check_purejump},
        {"ito", check_ito},
        {"concentration", check_concentration},
        {"cadlag_bdg", check_cadlag_bdg},
        {"qv_brownian", check_qv_brownian},
        {"crossings", check_crossings},
        {"continuity", check_continuity},
    };
    for (const auto& [n, fn] : table) {
        if (n == name) return fn(o);
    }
    throw ContractError("unknown check: " + name);
}

}  // namespace pathcalc
