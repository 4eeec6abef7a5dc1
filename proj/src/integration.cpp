#include "pathcalc/integration.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"
#include "pathcalc/partitions.hpp"

namespace pathcalc {

namespace {

double dot_increment(const Vec& f, const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * (b[i] - a[i]);
    return s;
}

}  // namespace

double integrate_step(const StepIntegrand& F, const Path& path, double t) {
    if (F.dim() != path.dim()) throw ContractError("integrand and path dimensions differ");
    if (!(t >= 0.0 && t <= path.horizon())) throw DomainError("t outside [0, T]");
    return capital(F.body, path, t);
}

F2Sum::F2Sum(const StepIntegrand& F, const Path& path, int n) : path_(&path) {
    if (F.dim() != path.dim()) throw ContractError("integrand and path dimensions differ");
    const auto tau = lebesgue_partition_nd(path, n).times;
    const double zero = 0.0;
    rho_ = merge_times({tau, F.body.times, std::span<const double>(&zero, 1)}, path.horizon());
    s_.reserve(rho_.size());
    f_.reserve(rho_.size());
    prefix_.assign(rho_.size(), 0.0);
    for (std::size_t k = 0; k < rho_.size(); ++k) {
        s_.push_back(path.eval(rho_[k]));
        f_.push_back(F.body.position_after(rho_[k]));
        if (k > 0) {
            const double inc = dot_increment(f_[k - 1], s_[k - 1], s_[k]);
            prefix_[k] = prefix_[k - 1] + inc * inc;
        }
    }
}

double F2Sum::operator()(double t) const {
    auto it = std::upper_bound(rho_.begin(), rho_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - rho_.begin()) - 1;
    if (rho_[k] == t) return prefix_[k];
    const double inc = dot_increment(f_[k], s_[k], path_->eval(t));
    return prefix_[k] + inc * inc;
}

F2Report integrate_f2_dqv(const StepIntegrand& F, const Path& path, int n_max, double tol) {
    if (n_max < 1 || n_max > kMaxGeneration) throw ContractError("n_max out of range");
    F2Report r;
    r.tol = tol;
    for (int n = 1; n <= n_max; ++n) {
        F2Sum sum(F, path, n);
        r.generations.push_back(n);
        r.terminal.push_back(sum(path.horizon()));
        if (n == n_max) {
            r.times = sum.grid();
            r.values.reserve(r.times.size());
            for (std::size_t k = 0; k < r.times.size(); ++k) r.values.push_back(sum.at_index(k));
            if (r.times.back() < path.horizon()) {
                r.times.push_back(path.horizon());
                r.values.push_back(r.terminal.back());
            }
        }
    }
    r.value_T = r.terminal.back();
    r.cauchy_diff = n_max > 1 ? std::abs(r.terminal[n_max - 1] - r.terminal[n_max - 2]) : 0.0;
    r.converged = n_max > 1 && r.cauchy_diff <= tol;
    return r;
}

double f2_dqv(const StepIntegrand& F, const Path& path, int n, double t) {
    return F2Sum(F, path, n)(t);
}

CagladRule constant_rule(const Vec& c) {
    return {"constant", [c](const Path&, double) { return c; }};
}

CagladRule left_limit_rule() {
    return {"left_limit", [](const Path& p, double t) { return p.eval(t); }};
}

CagladRule step_rule(const StepIntegrand& F) {
    return {"step", [F](const Path&, double t) { return F.body.position_after(t); }};
}

StepIntegrand approximate_caglad(const CagladRule& rule, const Path& path, int n) {
    const auto tau = lebesgue_partition_nd(path, n);
    StepIntegrand F;
    F.f0 = rule.value_after(path, 0.0);
    F.body.dim = path.dim();
    for (double t : tau.times) {
        if (t >= path.horizon()) break;
        const Vec v = rule.value_after(path, t);
        if (v.size() != path.dim()) throw ContractError("rule returned a vector of the wrong size");
        F.body.append(t, v);
    }
    if (F.body.times.empty()) F.body.append(0.0, Vec(path.dim(), 0.0));
    return F;
}

ItoReport ito_integral(const CagladRule& rule, const Path& path, int n_max, double tol,
                       int n_min) {
    if (n_min < 1 || n_max < n_min || n_max > kMaxGeneration) {
        throw ContractError("generation range out of bounds");
    }
    ItoReport r;
    r.tol = tol;
    StepIntegrand prev;
    for (int n = n_min; n <= n_max; ++n) {
        StepIntegrand F = approximate_caglad(rule, path, n);
        r.generations.push_back(n);
        CapitalEvaluator cur(F.body, path);
        r.terminal.push_back(cur(path.horizon()));
        if (n > n_min) {
            // both integrals move only at their own times and the events
            CapitalEvaluator old(prev.body, path);
            const auto grid = merge_times({F.body.times, prev.body.times, path.times()},
                                          path.horizon());
            double d = 0.0;
            for (double t : grid) d = std::max(d, std::abs(cur(t) - old(t)));
            r.sup_diff.push_back(d);
        }
        if (n == n_max) r.curve = capital_curve(F.body, path);
        prev = std::move(F);
    }
    r.converged = !r.sup_diff.empty() && r.sup_diff.back() <= tol;
    if (r.sup_diff.empty()) {
        r.note = "single generation, no convergence diagnostic";
    } else if (r.converged) {
        r.note = "consecutive generations agree within tol";
    } else {
        r.note = "not converged within tol; paths where the approximations diverge "
                 "admit a pathwise arbitrage of the first kind";
    }
    return r;
}

}  // namespace pathcalc
