#include "pathcalc/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/bdg.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/integration.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/quadratic_variation.hpp"

namespace pathcalc {

IntegrandRule constant_integrand(const Vec& c) {
    return [c](const Path&) { return StepIntegrand::constant(c); };
}

FrequencyReport frequency_report(std::size_t count, std::size_t hits, double bound) {
    FrequencyReport r;
    r.count = count;
    r.hits = hits;
    r.bound = bound;
    r.frequency = count ? static_cast<double>(hits) / static_cast<double>(count) : 0.0;
    const double q = std::min(std::max(r.frequency, bound), 1.0);
    r.std_err = count ? std::sqrt(q * (1.0 - q) / static_cast<double>(count)) : 0.0;
    r.pass = r.frequency <= bound + 3.0 * r.std_err;
    return r;
}

FrequencyReport concentration_check_continuous(const IntegrandRule& F,
                                               std::span<const Path> ensemble, double a,
                                               double b, int n) {
    if (ensemble.empty()) throw ContractError("empty ensemble");
    std::vector<char> hit(ensemble.size(), 0);
    parallel_for(ensemble.size(), [&](std::size_t i) {
        const Path& p = ensemble[i];
        const StepIntegrand f = F(p);
        const double sup = capital_curve(f.body, p).max_abs();
        if (!(sup >= a * std::sqrt(b))) return;
        hit[i] = f2_dqv(f, p, n, p.horizon()) <= b;
    });
    const auto hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    return frequency_report(ensemble.size(), hits, 2.0 * std::exp(-a * a / 2.0));
}

double corollary_bound(std::size_t dim, double a, double b, double c, double M,
                       const PsiSpec& psi) {
    const double d = static_cast<double>(dim);
    return (1.0 + 3.0 * d * M + 2.0 * d * psi(M)) * (6.0 * std::sqrt(b) + 2.0 + 2.0 * M) / a * c;
}

CadlagBDGReport bdg_bound_check_cadlag(const IntegrandRule& F, std::span<const Path> ensemble,
                                       double a, double b, double c, double M,
                                       const PsiSpec& psi, int n, int qv_n_max) {
    if (ensemble.empty()) throw ContractError("empty ensemble");
    std::vector<char> hit(ensemble.size(), 0);
    std::vector<double> slack(ensemble.size(), 0.0);
    parallel_for(ensemble.size(), [&](std::size_t i) {
        const Path& p = ensemble[i];
        const StepIntegrand f = F(p);
        const double sup = capital_curve(f.body, p).max_abs();
        const double fsup = f.sup_norm(p.horizon());
        const double qv = qv_limit(p, qv_n_max, 1e-12).limit_norm_T();
        hit[i] = sup >= a && fsup <= c && qv <= b && sup_norm(p) <= M;

        const PathwiseBDGTruncation trunc{b * c * c, c, M};
        const auto full = pathwise_bdg_check(f, p, n);
        const auto cut = pathwise_bdg_check(f, p, n, &trunc);
        for (const auto* r : {&full, &cut}) {
            if (!r->holds) {
                throw InternalConsistencyError(
                    "pathwise BDG inequality failed on path " + std::to_string(i) +
                    ": lhs " + std::to_string(r->lhs) + " > rhs " + std::to_string(r->rhs));
            }
        }
        slack[i] = std::min(full.rhs - full.lhs, cut.rhs - cut.lhs);
    });
    CadlagBDGReport r;
    const auto hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    r.frequency = frequency_report(ensemble.size(), hits,
                                   corollary_bound(ensemble[0].dim(), a, b, c, M, psi));
    r.pathwise_checks = 2 * ensemble.size();
    r.worst_pathwise_slack = *std::min_element(slack.begin(), slack.end());
    return r;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return 0.0;
    const double den = static_cast<double>(m) * sxx - sx * sx;
    if (den == 0.0) return 0.0;
    return (static_cast<double>(m) * sxy - sx * sy) / den;
}

ContinuityReport continuity_experiment(std::span<const Path> ensemble,
                                       const ContinuityParams& params) {
    if (ensemble.empty()) throw ContractError("empty ensemble");
    std::vector<double> offsets = params.offsets;
    if (offsets.empty()) {
        for (int k = 1; k <= 8; ++k) offsets.push_back(std::ldexp(1.0, -k));
    }
    const bool cadlag = params.kind == ContinuityCase::Cadlag;
    const std::size_t N = ensemble.size();

    std::vector<StepIntegrand> F(N);
    std::vector<double> qv_norm(N, 0.0);
    parallel_for(N, [&](std::size_t i) {
        F[i] = approximate_caglad(left_limit_rule(), ensemble[i], params.n);
        if (cadlag) qv_norm[i] = qv_limit(ensemble[i], params.qv_n_max, 1e-12).limit_norm_T();
    });

    ContinuityReport r;
    r.kind = params.kind;
    r.exponent = cadlag ? 1.0 / 3.0 : 0.5 - params.epsilon;
    MetricParams mp = params.metric;
    mp.epsilon = params.epsilon;
    for (double delta : offsets) {
        std::vector<PathDiff> integrand(N), integral(N);
        parallel_for(N, [&](std::size_t i) {
            const Path& p = ensemble[i];
            const StepIntegrand G = F[i].shifted(Vec(p.dim(), delta));
            integrand[i] = integrand_diff(F[i], G, p, params.n, qv_norm[i]);
            integral[i] = integral_diff(F[i], G, p, params.n, qv_norm[i]);
        });
        ContinuityRow row;
        row.offset = delta;
        if (cadlag) {
            row.x = metric(MetricName::DInf, integrand, mp).value;
            row.y = metric(MetricName::DInfPsi, integral, mp).value;
        } else {
            row.x = metric(MetricName::DQV, integrand, mp).value;
            row.y = metric(MetricName::DInf, integral, mp).value;
        }
        row.x_power = std::pow(row.x, r.exponent);
        r.rows.push_back(row);
    }
    std::vector<double> xs, ys;
    for (const auto& row : r.rows) {
        xs.push_back(row.x);
        ys.push_back(row.y);
    }
    r.slope = log_log_slope(xs, ys);
    r.pass = r.slope >= r.exponent - r.slack;
    return r;
}

namespace {

std::vector<double> random_times(PhiloxStream& rng, std::size_t m) {
    // 0 followed by m strictly increasing times in (0, 1)
    std::vector<double> gaps(m + 1);
    double total = 0.0;
    for (auto& g : gaps) {
        g = 0.05 + rng.uniform();
        total += g;
    }
    std::vector<double> t{0.0};
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        acc += gaps[k];
        t.push_back(acc / total);
    }
    return t;
}

void clip_downward(std::vector<double>& v, const PsiSpec& psi) {
    double run_sup = std::abs(v[0]);
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double limit = psi(run_sup);
        if (v[k - 1] - v[k] > limit) v[k] = v[k - 1] - limit;
        run_sup = std::max(run_sup, std::abs(v[k]));
    }
}

}  // namespace

Path random_step_path(PhiloxStream& rng, std::size_t max_events, double scale,
                      const PsiSpec* psi) {
    const std::size_t m = 1 + rng.next_u32() % max_events;
    auto t = random_times(rng, m);
    std::vector<double> v(m + 1);
    v[0] = scale * rng.normal();
    for (std::size_t k = 1; k <= m; ++k) v[k] = v[k - 1] + scale * rng.normal();
    if (psi) clip_downward(v, *psi);
    return Path::scalar(1.0, std::move(t), std::move(v), Interp::Step);
}

Path random_bounded_path(PhiloxStream& rng, std::size_t events, double K, const PsiSpec& psi) {
    auto t = random_times(rng, events);
    std::vector<double> v(events + 1);
    for (auto& x : v) x = K * (2.0 * rng.uniform() - 1.0) * 0.999;
    clip_downward(v, psi);
    return Path::scalar(1.0, std::move(t), std::move(v), Interp::Step);
}

Path random_walk_path(PhiloxStream& rng, std::size_t steps, double c) {
    std::vector<double> t(steps + 1), v(steps + 1, 0.0);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) / static_cast<double>(steps);
    for (std::size_t k = 1; k <= steps; ++k) v[k] = v[k - 1] + c * (2.0 * rng.uniform() - 1.0);
    return Path::scalar(1.0, std::move(t), std::move(v), Interp::Step);
}

std::vector<double> random_bdg_sequence(PhiloxStream& rng, std::size_t max_len) {
    const std::size_t len = 1 + rng.next_u32() % max_len;
    const double scale = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    std::vector<double> x(len, 0.0);
    switch (rng.next_u32() % 4) {
        case 0:  // random walk
            x[0] = scale * rng.normal();
            for (std::size_t k = 1; k < len; ++k) x[k] = x[k - 1] + scale * rng.normal();
            break;
        case 1:  // independent values
            for (auto& v : x) v = scale * rng.normal();
            break;
        case 2:  // walk from zero with flat stretches, so 0/0 shows up
            for (std::size_t k = 1; k < len; ++k) {
                x[k] = rng.uniform() < 0.4 ? x[k - 1] : x[k - 1] + scale * rng.normal();
            }
            break;
        default:  // long zero prefix, then a few values
            for (std::size_t k = len / 2; k < len; ++k) {
                x[k] = rng.uniform() < 0.5 ? 0.0 : scale * rng.normal();
            }
            break;
    }
    return x;
}

}  // namespace pathcalc
