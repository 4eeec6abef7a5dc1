#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pathcalc/metrics.hpp"
#include "pathcalc/path.hpp"
#include "pathcalc/psi.hpp"
#include "pathcalc/rng.hpp"
#include "pathcalc/simple_process.hpp"

namespace pathcalc {

/// Integrand realized per path.
using IntegrandRule = std::function<StepIntegrand(const Path&)>;

IntegrandRule constant_integrand(const Vec& c);

/// One-sided binomial check of an empirical frequency against a bound.
struct FrequencyReport {
    std::size_t count = 0;
    std::size_t hits = 0;
    double frequency = 0.0;
    double bound = 0.0;
    double std_err = 0.0;  // sqrt(q (1 - q) / N), q = min(max(frequency, bound), 1)
    bool pass = true;      // frequency <= bound + 3 std_err
};

FrequencyReport frequency_report(std::size_t count, std::size_t hits, double bound);

/// Frequency of {||F.S||_inf >= a sqrt(b)} and {int F^2 d[S] <= b} on a
/// continuous ensemble against 2 exp(-a^2/2). The quadratic term is taken
/// at generation n.
FrequencyReport concentration_check_continuous(const IntegrandRule& F,
                                               std::span<const Path> ensemble, double a,
                                               double b, int n);

struct CadlagBDGReport {
    FrequencyReport frequency;
    std::size_t pathwise_checks = 0;
    double worst_pathwise_slack = 0.0;  // min over paths of rhs - lhs
};

/// Bound (1 + 3dM + 2d psi(M)) (6 sqrt(b) + 2 + 2M) c / a on
/// the frequency of {||F.S|| >= a, ||F|| <= c, |[S]_T| <= b, ||S|| <= M},
/// plus the pathwise BDG strategy inequality (with and without the
/// truncation) at generation n on every path. A pathwise failure throws
/// InternalConsistencyError. |[S]_T| comes from qv_limit at qv_n_max.
CadlagBDGReport bdg_bound_check_cadlag(const IntegrandRule& F, std::span<const Path> ensemble,
                                       double a, double b, double c, double M,
                                       const PsiSpec& psi, int n, int qv_n_max);

double corollary_bound(std::size_t dim, double a, double b, double c, double M,
                       const PsiSpec& psi);

enum class ContinuityCase { Continuous, Cadlag };

struct ContinuityRow {
    double offset = 0.0;
    double x = 0.0;        // d_QV(F, G) or d_inf(F, G)
    double y = 0.0;        // d_inf or d_inf_psi of the integrals
    double x_power = 0.0;  // x^{exponent}
};

struct ContinuityReport {
    ContinuityCase kind = ContinuityCase::Continuous;
    std::vector<ContinuityRow> rows;
    double exponent = 0.0;  // 1/2 - eps or 1/3
    double slope = 0.0;     // least squares in log-log, zero rows skipped
    double slack = 0.1;
    bool pass = false;
};

struct ContinuityParams {
    ContinuityCase kind = ContinuityCase::Continuous;
    std::vector<double> offsets;  // defaults to 2^-1 .. 2^-8
    double epsilon = 0.25;
    int n = 8;         // partition generation for F and the quadratic terms
    int qv_n_max = 12; // generations for |[S]_T|
    MetricParams metric;
};

/// G = F + offset * 1 for each offset, F the left-point approximation of
/// S_- at generation n.
ContinuityReport continuity_experiment(std::span<const Path> ensemble,
                                       const ContinuityParams& params);

/// Least-squares slope of log y against log x over rows with x, y > 0.
double log_log_slope(std::span<const double> x, std::span<const double> y);

// Random inputs shared by the verification checks.

/// Step path on [0, 1] with 1..max_events events after time 0, N(0, scale)
/// increments, optional clipping of downward jumps to psi(running sup).
Path random_step_path(PhiloxStream& rng, std::size_t max_events, double scale,
                      const PsiSpec* psi = nullptr);

/// Step path on [0, 1] kept strictly inside (-K, K) with downward jumps
/// bounded by psi(running sup).
Path random_bounded_path(PhiloxStream& rng, std::size_t events, double K, const PsiSpec& psi);

/// Random walk with increments uniform on [-c, c] as a step path on [0, 1].
Path random_walk_path(PhiloxStream& rng, std::size_t steps, double c);

/// Sequence of length 1..max_len with values on a random scale in
/// [10^-3, 10^3]; some sequences start at zero or carry zero stretches.
std::vector<double> random_bdg_sequence(PhiloxStream& rng, std::size_t max_len);

}  // namespace pathcalc
