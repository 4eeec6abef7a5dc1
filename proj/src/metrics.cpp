#include "pathcalc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"
#include "pathcalc/integration.hpp"

namespace pathcalc {

std::string to_string(MetricName name) {
    switch (name) {
        case MetricName::DInf: return "d_inf";
        case MetricName::DQV: return "d_QV";
        case MetricName::DQVLoc: return "d_QV_loc";
        case MetricName::DInfLoc: return "d_inf_loc";
        case MetricName::DInfBM: return "d_inf_bM";
        case MetricName::DInfPsi: return "d_inf_psi";
    }
    return "?";
}

MetricName metric_from_string(const std::string& s) {
    for (auto m : {MetricName::DInf, MetricName::DQV, MetricName::DQVLoc, MetricName::DInfLoc,
                   MetricName::DInfBM, MetricName::DInfPsi}) {
        if (to_string(m) == s) return m;
    }
    throw ContractError("unknown metric: " + s);
}

namespace {

double mean_of(std::span<const PathDiff> diffs, auto&& term) {
    double s = 0.0;
    for (const auto& d : diffs) s += term(d);
    return s / static_cast<double>(diffs.size());
}

double indicator(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

MetricEstimate metric(MetricName name, std::span<const PathDiff> diffs,
                      const MetricParams& p) {
    if (diffs.empty()) throw ContractError("empty ensemble");
    if (p.n_trunc < 1) throw ContractError("truncation must be >= 1");
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw ContractError("epsilon must lie in (0, 1)");
    MetricEstimate e;
    e.name = to_string(name);
    e.ensemble_size = diffs.size();
    e.note = "empirical lower bound for the outer expectation";
    const int N = p.n_trunc;

    switch (name) {
        case MetricName::DInf:
            e.value = mean_of(diffs, [](const PathDiff& d) { return std::min(d.sup_diff, 1.0); });
            break;
        case MetricName::DQV:
            e.value = mean_of(diffs,
                              [](const PathDiff& d) { return std::min(std::sqrt(d.qv_diff), 1.0); });
            break;
        case MetricName::DInfBM:
            e.value = mean_of(diffs, [&](const PathDiff& d) {
                return std::min(d.sup_diff, indicator(d.qv_norm <= p.b && d.path_sup <= p.M));
            });
            break;
        case MetricName::DQVLoc:
        case MetricName::DInfLoc: {
            const bool qv = name == MetricName::DQVLoc;
            e.truncation = N;
            e.tail_bound = std::ldexp(1.0, -N);
            for (int n = 1; n <= N; ++n) {
                const double b = std::ldexp(1.0, n);
                const double dn = mean_of(diffs, [&](const PathDiff& d) {
                    const double x = qv ? std::sqrt(d.qv_diff) : d.sup_diff;
                    return std::min(x, indicator(d.qv_norm <= b));
                });
                e.value += std::ldexp(dn, -n);
            }
            break;
        }
        case MetricName::DInfPsi: {
            e.truncation = N;
            e.epsilon = p.epsilon;
            const double r = std::pow(2.0, -0.5 * (1.0 + p.epsilon));
            const double q = std::pow(2.0, -(1.0 + p.epsilon));
            double a_n = 0.0, b_n = 0.0;
            for (int n = 1; n <= N; ++n) {
                a_n += std::pow(r, n);
                b_n += std::pow(q, n);
            }
            e.tail_bound = std::max(0.0, r / (1.0 - r) * (q / (1.0 - q)) - a_n * b_n);
            for (int n = 1; n <= N; ++n) {
                const double b = std::ldexp(1.0, n);
                for (int m = 1; m <= N; ++m) {
                    const double M = std::ldexp(1.0, m);
                    const double dnm = mean_of(diffs, [&](const PathDiff& d) {
                        return std::min(d.sup_diff, indicator(d.qv_norm <= b && d.path_sup <= M));
                    });
                    const double w = std::pow(2.0, -(0.5 * n + m) * (1.0 + p.epsilon)) /
                                     std::max({p.psi(M), M, 1.0});
                    e.value += w * std::min(dnm, 1.0);
                }
            }
            break;
        }
    }
    return e;
}

PathDiff integrand_diff(const StepIntegrand& F, const StepIntegrand& G, const Path& path, int n,
                        double qv_norm) {
    const StepIntegrand D = combine(1.0, F, -1.0, G);
    PathDiff d;
    d.sup_diff = D.sup_norm(path.horizon());
    d.qv_diff = f2_dqv(D, path, n, path.horizon());
    d.qv_norm = qv_norm;
    d.path_sup = sup_norm(path);
    return d;
}

PathDiff integral_diff(const StepIntegrand& F, const StepIntegrand& G, const Path& path, int n,
                       double qv_norm) {
    const StepIntegrand D = combine(1.0, F, -1.0, G);
    PathDiff d;
    d.sup_diff = capital_curve(D.body, path).max_abs();
    d.qv_diff = f2_dqv(D, path, n, path.horizon());
    d.qv_norm = qv_norm;
    d.path_sup = sup_norm(path);
    return d;
}

}  // namespace pathcalc
