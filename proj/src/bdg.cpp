#include "pathcalc/bdg.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"
#include "pathcalc/partitions.hpp"
#include "pathcalc/strategies.hpp"

namespace pathcalc {

std::vector<double> bdg_weights(std::span<const double> x) {
    std::vector<double> h;
    if (x.empty()) return h;
    h.reserve(x.size() - 1);
    double qv = x[0] * x[0];
    double star = std::abs(x[0]);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double den = std::sqrt(qv + star * star);
        h.push_back(den == 0.0 ? 0.0 : x[k] / den);
        const double dx = x[k + 1] - x[k];
        qv += dx * dx;
        star = std::max(star, std::abs(x[k + 1]));
    }
    return h;
}

BDGCheck bdg_check(std::span<const double> x) {
    BDGCheck r;
    if (x.empty()) return r;
    const auto h = bdg_weights(x);
    double qv = x[0] * x[0];
    double star = std::abs(x[0]);
    double scale = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double dx = x[k + 1] - x[k];
        r.transform += h[k] * dx;
        scale += std::abs(h[k] * dx);
        qv += dx * dx;
        star = std::max(star, std::abs(x[k + 1]));
    }
    r.lhs = star;
    r.quadratic = qv;
    r.rhs = 6.0 * std::sqrt(qv) + 2.0 * r.transform;
    // rounding allowance proportional to the magnitudes that were summed
    const double tol = 1e-12 * (star + 6.0 * std::sqrt(qv) + 2.0 * scale);
    r.holds = r.lhs <= r.rhs + tol;
    return r;
}

namespace {

struct Grid {
    std::vector<double> rho;  // rho^n restricted to [0, theta], theta appended
    double theta;
};

double first_quadratic_hit(const StepIntegrand& F, const Path& path,
                           const std::vector<double>& rho, double b) {
    // the running quadratic sum only moves at path events and grid times
    const auto fine = merge_times({rho, path.times()}, path.horizon());
    double done = 0.0;
    std::size_t k = 0;
    Vec s_anchor = path.eval(0.0);
    Vec f = F.body.position_after(0.0);
    for (double t : fine) {
        while (k + 1 < rho.size() && rho[k + 1] <= t) {
            const Vec s_next = path.eval(rho[k + 1]);
            double inc = 0.0;
            for (std::size_t i = 0; i < path.dim(); ++i) inc += f[i] * (s_next[i] - s_anchor[i]);
            done += inc * inc;
            ++k;
            s_anchor = s_next;
            f = F.body.position_after(rho[k]);
        }
        const Vec st = path.eval(t);
        double inc = 0.0;
        for (std::size_t i = 0; i < path.dim(); ++i) inc += f[i] * (st[i] - s_anchor[i]);
        if (done + inc * inc >= b) return t;
    }
    return kNever;
}

Grid bdg_grid(const StepIntegrand& F, const Path& path, int n, const PathwiseBDGTruncation* trunc) {
    const auto tau = lebesgue_partition_nd(path, n).times;
    Grid g;
    g.rho = merge_times({F.body.times, tau, std::span<const double>(&path.times()[0], 1)},
                        path.horizon());
    g.theta = path.horizon();
    if (trunc) {
        double theta = std::min(g.theta, gamma_K(path, trunc->M));
        if (norm(F.f0) >= trunc->c) theta = 0.0;
        for (std::size_t k = 0; k < F.body.size(); ++k) {
            if (F.body.times[k] >= theta) break;
            if (norm(F.body.position(k)) >= trunc->c) {
                theta = std::min(theta, F.body.times[k]);
                break;
            }
        }
        theta = std::min(theta, first_quadratic_hit(F, path, g.rho, trunc->b));
        g.theta = theta;
    }
    std::vector<double> kept;
    for (double t : g.rho) {
        if (t < g.theta) kept.push_back(t);
    }
    kept.push_back(g.theta);
    if (kept.size() > 1 && kept[kept.size() - 2] == g.theta) kept.pop_back();
    g.rho = std::move(kept);
    return g;
}

}  // namespace

RealizedStrategy bdg_strategy(const StepIntegrand& F, const Path& path, int n,
                              const PathwiseBDGTruncation* trunc) {
    const Grid g = bdg_grid(F, path, n, trunc);
    std::vector<double> x{0.0};
    std::vector<Vec> f;
    for (std::size_t k = 0; k + 1 < g.rho.size(); ++k) {
        f.push_back(F.body.position_after(g.rho[k]));
        const Vec s0 = path.eval(g.rho[k]);
        const Vec s1 = path.eval(g.rho[k + 1]);
        double inc = 0.0;
        for (std::size_t i = 0; i < path.dim(); ++i) inc += f.back()[i] * (s1[i] - s0[i]);
        x.push_back(x.back() + inc);
    }
    const auto h = bdg_weights(x);
    RealizedStrategy phi{path.dim(), {}, {}};
    for (std::size_t k = 0; k + 1 < g.rho.size(); ++k) {
        Vec pos = f[k];
        for (double& p : pos) p *= h[k];
        phi.append(g.rho[k], pos);
    }
    if (phi.times.empty()) return RealizedStrategy::zero(path.dim());
    return phi.stopped_at(g.theta);
}

PathwiseBDGReport pathwise_bdg_check(const StepIntegrand& F, const Path& path, int n,
                                     const PathwiseBDGTruncation* trunc) {
    if (F.dim() != path.dim()) throw ContractError("integrand and path dimensions differ");
    const Grid g = bdg_grid(F, path, n, trunc);
    PathwiseBDGReport r;
    r.theta = g.theta;

    std::vector<double> x{0.0};
    double scale = 0.0;
    for (std::size_t k = 0; k + 1 < g.rho.size(); ++k) {
        const Vec fk = F.body.position_after(g.rho[k]);
        const Vec s0 = path.eval(g.rho[k]);
        const Vec s1 = path.eval(g.rho[k + 1]);
        double inc = 0.0;
        for (std::size_t i = 0; i < path.dim(); ++i) inc += fk[i] * (s1[i] - s0[i]);
        x.push_back(x.back() + inc);
        r.quadratic += inc * inc;
    }
    const auto h = bdg_weights(x);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        r.phi_dot_s += h[k] * (x[k + 1] - x[k]);
        scale += std::abs(h[k] * (x[k + 1] - x[k]));
    }

    // sup of |(F.S)| on [0, theta]: the integral moves only at events and at
    // F's jump times, and is affine in between in linear mode
    const auto fine = merge_times({g.rho, path.times(), F.body.times}, g.theta);
    CapitalEvaluator integral(F.body, path);
    for (double t : fine) r.lhs = std::max(r.lhs, std::abs(integral(t)));

    const double fsup = F.sup_norm(path.horizon());
    r.correction = fsup * std::sqrt(static_cast<double>(path.dim())) * std::ldexp(1.0, 1 - n);
    r.rhs = 6.0 * std::sqrt(r.quadratic) + 2.0 * r.phi_dot_s + r.correction;
    r.grid_points = g.rho.size();
    const double tol = 1e-12 * (r.lhs + 6.0 * std::sqrt(r.quadratic) + 2.0 * scale + r.correction);
    r.holds = r.lhs <= r.rhs + tol;
    return r;
}

}  // namespace pathcalc
