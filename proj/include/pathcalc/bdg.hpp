#pragma once

#include <span>
#include <vector>

#include "pathcalc/path.hpp"
#include "pathcalc/simple_process.hpp"

namespace pathcalc {

/// h_k = x_k / sqrt([x]_k + (x*_k)^2) for k = 0..n-1, with 0/0 = 0.
std::vector<double> bdg_weights(std::span<const double> x);

struct BDGCheck {
    double lhs = 0.0;         // x*_n
    double quadratic = 0.0;   // [x]_n
    double transform = 0.0;   // (h.x)_n
    double rhs = 0.0;         // 6 sqrt([x]_n) + 2 (h.x)_n
    bool holds = true;
};

/// Deterministic check of x*_n <= 6 sqrt([x]_n) + 2 (h.x)_n.
BDGCheck bdg_check(std::span<const double> x);

struct PathwiseBDGTruncation {
    double b;  // quadratic sum level
    double c;  // integrand size
    double M;  // path size
};

struct PathwiseBDGReport {
    double lhs = 0.0;         // sup_{t <= theta} |(F.S)_t|
    double quadratic = 0.0;   // sum_k (F_{rho_k} . S_{rho_k, rho_{k+1}})^2 up to theta
    double phi_dot_s = 0.0;   // (1_{[0,theta]} phi . S)_T with phi_k = h_k F_{rho_k}
    double correction = 0.0;  // ||F||_inf sqrt(d) 2^{1-n}
    double rhs = 0.0;
    double theta = 0.0;       // truncation time (T without truncation)
    std::size_t grid_points = 0;
    bool holds = true;
};

/// Sup of |(F.S)| over [0, theta] against 6 sqrt(quadratic) + 2 (phi.S) +
/// correction along rho^n = sigma U tau^n. The correction bounds how far
/// (F.S) moves inside one step of rho^n: each coordinate stays within 2^{1-n}
/// of its value at the step start.
PathwiseBDGReport pathwise_bdg_check(const StepIntegrand& F, const Path& path, int n,
                                     const PathwiseBDGTruncation* trunc = nullptr);

/// phi^n as a realized strategy on rho^n (truncated at theta when asked).
RealizedStrategy bdg_strategy(const StepIntegrand& F, const Path& path, int n,
                              const PathwiseBDGTruncation* trunc = nullptr);

}  // namespace pathcalc
