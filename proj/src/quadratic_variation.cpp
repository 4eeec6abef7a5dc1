#include "pathcalc/quadratic_variation.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"
#include "pathcalc/parallel.hpp"

namespace pathcalc {

QuadraticSum::QuadraticSum(const Path& path, std::span<const double> times, std::size_t i,
                           std::size_t j)
    : path_(&path), i_(i), j_(j) {
    if (i >= path.dim() || j >= path.dim()) throw ContractError("coordinate index out of range");
    if (times.empty() || times.front() != 0.0) throw ContractError("partition must start at 0");
    for (double t : times) {
        if (t > path.horizon()) break;
        times_.push_back(t);
        si_.push_back(path.eval(t, i));
        sj_.push_back(i == j ? si_.back() : path.eval(t, j));
    }
    prefix_.assign(times_.size(), 0.0);
    for (std::size_t k = 1; k < times_.size(); ++k) {
        prefix_[k] = prefix_[k - 1] + (si_[k] - si_[k - 1]) * (sj_[k] - sj_[k - 1]);
    }
}

double QuadraticSum::operator()(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
    if (times_[k] == t) return prefix_[k];
    const double di = path_->eval(t, i_) - si_[k];
    const double dj = (i_ == j_) ? di : path_->eval(t, j_) - sj_[k];
    return prefix_[k] + di * dj;
}

double discrete_qv(const Path& path, const LebesguePartition& partition, double t) {
    if (path.dim() != 1) throw ContractError("discrete_qv needs a 1-d path");
    if (!(t >= 0.0 && t <= path.horizon())) throw DomainError("t outside [0, T]");
    return QuadraticSum(path, partition.times, 0, 0)(t);
}

double discrete_cross_qv(const Path& path, int n, std::size_t i, std::size_t j, double t) {
    if (i >= path.dim() || j >= path.dim()) throw ContractError("coordinate index out of range");
    if (!(t >= 0.0 && t <= path.horizon())) throw DomainError("t outside [0, T]");
    const auto part = lebesgue_partition_nd(path, n);
    return QuadraticSum(path, part.times, i, j)(t);
}

double QVReport::limit_norm_T() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) s += limit_T(i, j) * limit_T(i, j);
    }
    return std::sqrt(s);
}

std::size_t QVReport::grid_index(double t) const {
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    if (it == grid.begin()) throw DomainError("t before the grid");
    return static_cast<std::size_t>(it - grid.begin()) - 1;
}

QVReport qv_limit(const Path& path, int n_max, double tol) {
    if (n_max < 1 || n_max > kMaxGeneration) throw ContractError("n_max must lie in [1, 52]");
    if (!(tol > 0.0)) throw ContractError("tol must be positive");
    const std::size_t d = path.dim();
    QVReport r;
    r.dim = d;
    r.tol = tol;
    const auto gens = static_cast<std::size_t>(n_max);
    r.partition_times.resize(gens);
    parallel_for(gens, [&](std::size_t g) {
        r.partition_times[g] = lebesgue_partition_nd(path, static_cast<int>(g) + 1).times;
    });
    std::vector<double> all(path.times().begin(), path.times().end());
    for (const auto& p : r.partition_times) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    while (!all.empty() && all.back() > path.horizon()) all.pop_back();
    if (all.back() != path.horizon()) all.push_back(path.horizon());
    r.grid = std::move(all);

    r.qv.resize(gens);
    parallel_for(gens, [&](std::size_t g) {
        auto& out = r.qv[g];
        out.assign(r.grid.size() * d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                QuadraticSum q(path, r.partition_times[g], i, j);
                for (std::size_t p = 0; p < r.grid.size(); ++p) {
                    const double v = q(r.grid[p]);
                    out[(p * d + i) * d + j] = v;
                    out[(p * d + j) * d + i] = v;
                }
            }
        }
    });
    // Between grid points every entry of Q^n - Q^{n-1} is affine in t in both
    // modes (the quadratic terms in S_t cancel), so its norm is convex there
    // and the sup over the grid is the sup over [0, T].
    for (std::size_t g = 0; g < gens; ++g) {
        r.generations.push_back(static_cast<int>(g) + 1);
        double sup = 0.0;
        for (std::size_t p = 0; p < r.grid.size(); ++p) {
            double s = 0.0;
            for (std::size_t e = 0; e < d * d; ++e) {
                const double prev = g == 0 ? 0.0 : r.qv[g - 1][p * d * d + e];
                const double z = r.qv[g][p * d * d + e] - prev;
                s += z * z;
            }
            sup = std::max(sup, std::sqrt(s));
        }
        r.z_sup.push_back(sup);
    }
    r.cauchy_tol_met = r.z_sup.back() < tol;
    return r;
}

ZProcess::ZProcess(const Path& path, int n)
    : path_(&path), n_(n), fine_(lebesgue_partition_1d(path, n)),
      coarse_(n > 1 ? lebesgue_partition_1d(path, n - 1) : LebesguePartition{}),
      q_fine_(path, fine_.times, 0, 0) {
    if (n > 1) q_coarse_.emplace(path, coarse_.times, 0, 0);
    z_tau_.resize(fine_.size());
    cum_sq_.assign(fine_.size(), 0.0);
    for (std::size_t k = 0; k < fine_.size(); ++k) {
        z_tau_[k] = z(fine_.times[k]);
        if (k > 0) {
            const double dz = z_tau_[k] - z_tau_[k - 1];
            cum_sq_[k] = cum_sq_[k - 1] + dz * dz;
        }
    }
}

double ZProcess::z(double t) const {
    const double qf = q_fine_(t);
    return q_coarse_ ? qf - (*q_coarse_)(t) : qf;
}

double ZProcess::k_constant(int n, double K, const PsiSpec& psi) {
    const double nn = static_cast<double>(n);
    const double kp = K + psi(K);
    return nn * nn * nn * nn * std::ldexp(1.0, -2 * n) + std::ldexp(1.0, 5 - n) * kp * kp;
}

double ZProcess::k_process(double K, const PsiSpec& psi, double t) const {
    const auto it = std::upper_bound(fine_.times.begin(), fine_.times.end(), t);
    const auto k = static_cast<std::size_t>(it - fine_.times.begin()) - 1;
    const double zt = z(t);
    const double stub = zt - z_tau_[k];
    return k_constant(n_, K, psi) + zt * zt - (cum_sq_[k] + stub * stub);
}

double ZProcess::sigma(double K) const {
    const double threshold = std::pow(static_cast<double>(n_), 4) * std::ldexp(1.0, -2 * n_);
    for (std::size_t k = 1; k < fine_.size(); ++k) {
        if (cum_sq_[k] > threshold || z_tau_[k] > K) return fine_.times[k];
    }
    return kNever;
}

double z_process(const Path& path, int n, double t) {
    if (path.dim() != 1) throw ContractError("z_process needs a 1-d path");
    if (!(t >= 0.0 && t <= path.horizon())) throw DomainError("t outside [0, T]");
    return ZProcess(path, n).z(t);
}

double k_process(const Path& path, int n, double K, const PsiSpec& psi, double t) {
    if (path.dim() != 1) throw ContractError("k_process needs a 1-d path");
    if (!(K > 0.0)) throw ContractError("K must be positive");
    if (!(t >= 0.0 && t <= path.horizon())) throw DomainError("t outside [0, T]");
    return ZProcess(path, n).k_process(K, psi, t);
}

double sigma_n_K(const Path& path, int n, double K) {
    if (path.dim() != 1) throw ContractError("sigma_n_K needs a 1-d path");
    if (!(K > 0.0)) throw ContractError("K must be positive");
    return ZProcess(path, n).sigma(K);
}

JumpIdentityVerdict jump_identity_check(const Path& path, const QVReport& report, double tol) {
    JumpIdentityVerdict v;
    if (path.mode() == Interp::Linear) return v;  // no jumps on either side
    const std::size_t d = path.dim();
    for (std::size_t e = 1; e < path.size(); ++e) {
        const double t = path.time(e);
        const std::size_t p = report.grid_index(t);
        if (p == 0) continue;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double dq = report.limit(p, i, j) - report.limit(p - 1, i, j);
                const double ds = (path.value(e, i) - path.value(e - 1, i)) *
                                  (path.value(e, j) - path.value(e - 1, j));
                const double diff = std::abs(dq - ds);
                if (diff > v.max_discrepancy) {
                    v.max_discrepancy = diff;
                    v.worst_time = t;
                }
            }
        }
    }
    v.pass = v.max_discrepancy <= tol;
    return v;
}

}  // namespace pathcalc
