#include "pathcalc/hoeffding.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"

namespace pathcalc {

double hoeffding_beta(double lambda, double c) {
    if (!(c >= 0.0)) throw ContractError("step bound must be non-negative");
    if (c == 0.0) return lambda;
    return std::exp(-0.5 * lambda * lambda * c * c) * std::sinh(lambda * c) / c;
}

namespace {

constexpr double kRelTol = 1e-12;

std::vector<double> decision_times(const RealizedStrategy& base, const Path& path,
                                   const CapitalCurve& m, const HoeffdingSpec& settings) {
    std::vector<double> out{0.0};
    if (settings.rule == DecisionRule::EveryEvent) {
        for (double t : m.times) {
            if (t > 0.0) out.push_back(t);
        }
        return out;
    }
    // IncrementLevel: a new step each time |M - M_rho| reaches c. In linear
    // mode M is affine between grid points and one segment may pass several
    // levels, each located exactly; in step mode the grid time itself is used.
    double anchor = 0.0;
    for (std::size_t g = 1; g < m.times.size(); ++g) {
        const double t0 = m.times[g - 1], v0 = m.values[g - 1];
        const double t1 = m.times[g], v1 = m.values[g];
        while (std::abs(v1 - anchor) >= settings.c) {
            double t = t1;
            if (path.mode() == Interp::Linear && v1 != v0) {
                const double target = v1 > anchor ? anchor + settings.c : anchor - settings.c;
                const double tau = t0 + (target - v0) / (v1 - v0) * (t1 - t0);
                t = std::clamp(tau, std::nextafter(out.back(), HUGE_VAL), t1);
                anchor = target;
            } else {
                anchor = v1;
            }
            if (t > out.back()) out.push_back(t);
        }
    }
    (void)base;
    return out;
}

}  // namespace

HoeffdingResult hoeffding_strategy(const RealizedStrategy& base, const Path& path,
                                   const HoeffdingSpec& settings) {
    if (!(settings.c > 0.0)) throw ContractError("step bound c must be positive");
    if (!std::isfinite(settings.lambda)) throw ContractError("lambda must be finite");
    base.validate();
    const CapitalEvaluator m_eval(base, path);
    const CapitalCurve m0 = capital_curve(base, path);

    HoeffdingResult r;
    r.decision_times = decision_times(base, path, m0, settings);
    const double beta = hoeffding_beta(settings.lambda, settings.c);

    // positions change at decision times and at base-strategy times
    const auto times = merge_times({r.decision_times, base.times}, path.horizon());
    RealizedStrategy H{base.dim, {}, {}};
    double wealth = 1.0;     // V at the current decision time
    double m_anchor = 0.0;   // M at the current decision time
    std::size_t next_decision = 0;
    for (double t : times) {
        if (next_decision < r.decision_times.size() && r.decision_times[next_decision] == t) {
            const double mt = m_eval(t);
            if (next_decision > 0) {
                const double inc = mt - m_anchor;
                wealth *= 1.0 + beta * inc;
            }
            m_anchor = mt;
            ++next_decision;
        }
        Vec h = base.position_after(t);
        for (double& x : h) x *= beta * wealth;
        H.append(t, h);
    }
    r.strategy = std::move(H);

    r.capital = capital_curve(r.strategy, path, r.decision_times);
    r.wrapped.times = r.capital.times;
    r.wrapped.values.reserve(r.capital.times.size());
    for (double t : r.capital.times) r.wrapped.values.push_back(m_eval(t));

    // bound check: |M_t - M_{rho_k}| <= c for t in the step (rho_k, rho_{k+1}]
    std::size_t k = 0;
    double anchor_value = 0.0;
    bool step_flagged = false;
    r.worst_slack = HUGE_VAL;
    for (std::size_t g = 0; g < r.capital.times.size(); ++g) {
        const double t = r.capital.times[g];
        const double mt = r.wrapped.values[g];
        if (t > 0.0 && std::abs(mt - anchor_value) > settings.c * (1.0 + kRelTol)) {
            if (!step_flagged) ++r.bound_violations;
            step_flagged = true;
        }
        while (k + 1 < r.decision_times.size() && r.decision_times[k + 1] <= t) {
            ++k;
            anchor_value = m_eval(r.decision_times[k]);
            step_flagged = false;
        }
        // steps begun by time t: decision times strictly before t
        const auto begun = std::lower_bound(r.decision_times.begin(), r.decision_times.end(), t) -
                           r.decision_times.begin();
        const double steps = static_cast<double>(begun);
        const double env =
            std::exp(settings.lambda * mt - 0.5 * settings.lambda * settings.lambda * settings.c * settings.c * steps);
        r.envelope.push_back(env);
        const double wealth_t = 1.0 + r.capital.values[g];
        r.min_wealth = std::min(r.min_wealth, wealth_t);
        const double slack = wealth_t - env;
        r.worst_slack = std::min(r.worst_slack, slack);
        if (slack < -kRelTol * std::max(1.0, env)) ++r.guarantee_failures;
    }
    return r;
}

StrategyRule hoeffding_rule(const StrategyRule& base, const HoeffdingSpec& settings) {
    return {"hoeffding",
            {{"inner", base.descriptor()}, {"lambda", settings.lambda}, {"c", settings.c},
             {"rule", settings.rule == DecisionRule::EveryEvent ? "every-event" : "increment-level"}},
            [base, settings](const Path& path) {
                return hoeffding_strategy(base(path), path, settings).strategy;
            }};
}

}  // namespace pathcalc
