#pragma once

#include <span>
#include <string>
#include <vector>

#include "pathcalc/path.hpp"
#include "pathcalc/psi.hpp"
#include "pathcalc/simple_process.hpp"

namespace pathcalc {

/// Per-path ingredients of every metric.
struct PathDiff {
    double sup_diff = 0.0;  // ||X - Y||_inf
    double qv_diff = 0.0;   // int_0^T (F - G)^{(x)2} d[S]
    double qv_norm = 0.0;   // |[S]_T|
    double path_sup = 0.0;  // ||S||_inf
};

enum class MetricName { DInf, DQV, DQVLoc, DInfLoc, DInfBM, DInfPsi };

std::string to_string(MetricName name);
MetricName metric_from_string(const std::string& s);

struct MetricParams {
    double b = 1.0;
    double M = 1.0;
    double epsilon = 0.25;
    int n_trunc = 20;
    PsiSpec psi = PsiSpec::affine(1.0, 1.0);
};

/// Empirical mean over the ensemble standing in for the outer expectation;
/// it can only bound that expectation from below.
struct MetricEstimate {
    std::string name;
    double value = 0.0;
    std::size_t ensemble_size = 0;
    int truncation = 0;
    double epsilon = 0.0;
    double tail_bound = 0.0;
    std::string note;
};

MetricEstimate metric(MetricName name, std::span<const PathDiff> diffs,
                      const MetricParams& params = {});

/// Integrand pair on one path: sup_diff = ||F - G||_inf, qv_diff along
/// generation n. qv_norm is |[S]_T| supplied by the caller.
PathDiff integrand_diff(const StepIntegrand& F, const StepIntegrand& G, const Path& path, int n,
                        double qv_norm);

/// Integral pair on one path: sup_diff = ||(F.S) - (G.S)||_inf, qv_diff as above.
PathDiff integral_diff(const StepIntegrand& F, const StepIntegrand& G, const Path& path, int n,
                       double qv_norm);

}  // namespace pathcalc
