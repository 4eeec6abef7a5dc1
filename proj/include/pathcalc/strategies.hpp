#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathcalc/path.hpp"
#include "pathcalc/simple_process.hpp"

namespace pathcalc {

/// A strategy as a functional of the path plus a descriptor naming the
/// construction. Rules must be non-anticipating: what they do up to time u
/// may depend only on the path restricted to [0, u].
struct StrategyRule {
    std::string kind;
    nlohmann::json params;
    std::function<RealizedStrategy(const Path&)> realize;

    RealizedStrategy operator()(const Path& path) const { return realize(path); }
    nlohmann::json descriptor() const { return {{"kind", kind}, {"params", params}}; }
};

StrategyRule zero_strategy(std::size_t dim);
StrategyRule buy_and_hold(const Vec& h);

/// inf{t : |S_t| >= K}, exact in both modes; kNever if it does not happen.
double gamma_K(const Path& path, double K);

/// inf{t : (H.S)_t <= -lambda}; kNever if it does not happen.
double rho_lambda(const RealizedStrategy& strategy, const Path& path, double lambda);

struct AdmissibilityVerdict {
    bool pass = true;
    double min_capital = 0.0;
    double worst_time = 0.0;
    /// Smallest capital minus the lower bound (negative means violated).
    double slack = 0.0;
    std::string reason;
};

AdmissibilityVerdict check_strong_admissibility(const RealizedStrategy& strategy,
                                                const Path& path, double lambda);
AdmissibilityVerdict check_weak_admissibility(const RealizedStrategy& strategy,
                                              const Path& path, double lambda);
std::vector<AdmissibilityVerdict> check_strong_admissibility(const StrategyRule& rule,
                                                             std::span<const Path> paths,
                                                             double lambda);
std::vector<AdmissibilityVerdict> check_weak_admissibility(const StrategyRule& rule,
                                                           std::span<const Path> paths,
                                                           double lambda);

/// Buy one unit when S <= a, sell when S >= b, stop at gamma_K.
StrategyRule doob_interval_strategy(double a, double b, double K, const PsiSpec& psi);

/// [K 2^{n+1} (2K + psi(K))]^{-1}
double doob_aggregate_weight(int n, double K, const PsiSpec& psi);

/// Weighted sum of the interval strategies over the dyadic intervals of
/// width 2^-n inside (-K, K).
StrategyRule doob_aggregate(int n, double K, const PsiSpec& psi);

/// [2K (2K + psi(K))]^{-1} 2^{-2n} U_t(w, 2^-n) at every time of `times`.
std::vector<double> doob_aggregate_lower_bound(const Path& path, int n, double K,
                                               const PsiSpec& psi,
                                               std::span<const double> times);

/// lambda (1 + 3 d K + 2 d psi(K))
double vovk_budget(double lambda, std::size_t dim, double K, const PsiSpec& psi);

/// lambda 1 on (0, rho_lambda(G) ^ gamma_K] plus G on [0, gamma_K].
StrategyRule vovk_lift(const StrategyRule& G, double lambda, double K, const PsiSpec& psi);

struct LStrategyResult {
    RealizedStrategy strategy;
    double stop_time = kNever;  // gamma_K ^ sigma^n_K
    double max_error = 0.0;
    std::size_t grid_points = 0;
    bool nested = true;  // pi_{n-1} within pi_n on this path
};

/// Realizes L^{K,n} on a 1-d path (n >= 2) and checks
/// K^n_{gamma ^ sigma ^ t} = const + (L.S)_t on the grid of events and both
/// partitions. Throws InternalConsistencyError beyond `tol`.
LStrategyResult l_strategy(const Path& path, int n, double K, const PsiSpec& psi,
                           double tol = 1e-9);

}  // namespace pathcalc
