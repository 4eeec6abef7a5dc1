#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pathcalc/path.hpp"
#include "pathcalc/simple_process.hpp"

namespace pathcalc {

/// (F.S)_t = sum_i F_{sigma_i} . S_{sigma_i ^ t, sigma_{i+1} ^ t}.
double integrate_step(const StepIntegrand& F, const Path& path, double t);

/// t -> sum_k (F_{rho_k} . S_{rho_k ^ t, rho_{k+1} ^ t})^2 along
/// rho = tau^n U sigma, F_{rho_k} being the value held on (rho_k, rho_{k+1}].
class F2Sum {
public:
    F2Sum(const StepIntegrand& F, const Path& path, int n);
    double operator()(double t) const;
    const std::vector<double>& grid() const noexcept { return rho_; }
    double at_index(std::size_t k) const { return prefix_[k]; }

private:
    const Path* path_;
    std::vector<double> rho_;
    std::vector<Vec> s_, f_;
    std::vector<double> prefix_;
};

struct F2Report {
    std::vector<int> generations;
    std::vector<double> terminal;  // value at T per generation
    std::vector<double> times;     // grid of the last generation
    std::vector<double> values;    // last generation on that grid
    double value_T = 0.0;
    double cauchy_diff = 0.0;      // |terminal[last] - terminal[last - 1]|
    double tol = 0.0;
    bool converged = false;
};

/// int_0^t F^{(x)2} d[S] along generations 1..n_max; the last generation is
/// the estimate.
F2Report integrate_f2_dqv(const StepIntegrand& F, const Path& path, int n_max, double tol);

double f2_dqv(const StepIntegrand& F, const Path& path, int n, double t);

/// Left-continuous integrand given by the value it holds just after t, i.e.
/// F_{t+}. For F_t = S_{t-} this is S_t.
struct CagladRule {
    std::string name;
    std::function<Vec(const Path&, double)> value_after;
};

CagladRule constant_rule(const Vec& c);
/// F_t = S_{t-}.
CagladRule left_limit_rule();
/// A realized step integrand seen as a rule.
CagladRule step_rule(const StepIntegrand& F);

/// Samples the rule at tau^n (the d-dim Lebesgue partition) and holds each
/// sample on (tau_k, tau_{k+1}].
StepIntegrand approximate_caglad(const CagladRule& rule, const Path& path, int n);

struct ItoReport {
    std::vector<int> generations;
    std::vector<double> terminal;  // (F^n.S)_T per generation
    /// sup_t |(F^n.S)_t - (F^{n-1}.S)_t| for consecutive generations.
    std::vector<double> sup_diff;
    CapitalCurve curve;            // last generation
    double tol = 0.0;
    bool converged = false;
    std::string note;
};

/// Integrates the step approximations of generations n_min..n_max. A
/// diverging sequence is reported, not thrown: on the paths where it happens
/// there is a pathwise arbitrage of the first kind.
ItoReport ito_integral(const CagladRule& rule, const Path& path, int n_max, double tol,
                       int n_min = 1);

}  // namespace pathcalc
