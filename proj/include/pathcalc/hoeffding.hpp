#pragma once

#include <span>
#include <vector>

#include "pathcalc/path.hpp"
#include "pathcalc/simple_process.hpp"
#include "pathcalc/strategies.hpp"

namespace pathcalc {

/// e^{-lambda^2 c^2 / 2} sinh(lambda c) / c, the slope of the chord of
/// x -> e^{lambda x} over [-c, c] scaled so 1 + beta x dominates
/// exp(lambda x - lambda^2 c^2 / 2). beta(0, c) = 0 and beta(lambda, 0) = lambda.
double hoeffding_beta(double lambda, double c);

/// How the wrapped capital M is cut into steps (rho_k, rho_{k+1}].
enum class DecisionRule {
    EveryEvent,      // a step per path event (and per base-strategy time)
    IncrementLevel,  // new step once |M_t - M_{rho_k}| reaches the bound c
};

struct HoeffdingSpec {
    double lambda = 1.0;
    double c = 1.0;  // per-step bound on |M_t - M_{rho_k}|
    DecisionRule rule = DecisionRule::EveryEvent;
};

struct HoeffdingResult {
    RealizedStrategy strategy;       // H^lambda, positions = beta_k V_k times the base position
    std::vector<double> decision_times;
    CapitalCurve capital;            // (H^lambda . S) on the merged grid
    CapitalCurve wrapped;            // M = (base . S) on the same grid
    std::vector<double> envelope;    // exp(lambda M_t - lambda^2/2 sum_{rho_k < t} c^2)
    std::size_t bound_violations = 0;  // steps where |M_t - M_{rho_k}| exceeded c
    std::size_t guarantee_failures = 0;  // grid times with 1 + capital < envelope
    double worst_slack = 0.0;        // min over grid of (1 + capital) - envelope
    double min_wealth = 1.0;         // min over grid of 1 + capital
};

/// Multiplicative strategy on top of `base`: hold beta_k V_{rho_k} units of
/// the base position on (rho_k, rho_{k+1}], V = 1 + capital. Guarantees
/// 1 + (H.S)_t >= exp(lambda M_t - lambda^2/2 sum_{rho_k < t} c^2) as long
/// as every step respects |M_t - M_{rho_k}| <= c; violations are counted.
HoeffdingResult hoeffding_strategy(const RealizedStrategy& base, const Path& path,
                                   const HoeffdingSpec& settings);

StrategyRule hoeffding_rule(const StrategyRule& base, const HoeffdingSpec& settings);

}  // namespace pathcalc
