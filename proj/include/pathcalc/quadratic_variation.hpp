#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pathcalc/partitions.hpp"
#include "pathcalc/path.hpp"

namespace pathcalc {

/// t -> sum_k S^i_{tau_k^t, tau_{k+1}^t} S^j_{tau_k^t, tau_{k+1}^t} along a fixed
/// list of times (which must start at 0), evaluated in O(log N) from prefix
/// sums.
class QuadraticSum {
public:
    QuadraticSum(const Path& path, std::span<const double> times, std::size_t i, std::size_t j);
    double operator()(double t) const;
    /// Value at the k-th partition time.
    double at_index(std::size_t k) const { return prefix_[k]; }
    std::size_t size() const noexcept { return times_.size(); }

private:
    const Path* path_;
    std::size_t i_, j_;
    std::vector<double> times_;
    std::vector<double> si_, sj_;
    std::vector<double> prefix_;
};

/// Q^n_t for a 1-d path along a partition computed from it.
double discrete_qv(const Path& path, const LebesguePartition& partition, double t);

/// Q^{i,j,n}_t along the d-dim partition (indices 0-based).
double discrete_cross_qv(const Path& path, int n, std::size_t i, std::size_t j, double t);

struct QVReport {
    std::size_t dim = 1;
    std::vector<int> generations;
    /// Common evaluation grid: events and every partition time of every generation.
    std::vector<double> grid;
    /// qv[g][p * dim * dim + i * dim + j] = Q^{i,j,n_g} at grid[p].
    std::vector<std::vector<double>> qv;
    std::vector<std::vector<double>> partition_times;
    /// ||Z^n||_inf, Frobenius norm per grid point; Z^1 = Q^1 since Q^0 := 0.
    std::vector<double> z_sup;
    double tol = 0.0;
    bool cauchy_tol_met = false;

    int n_max() const { return generations.back(); }
    double at(std::size_t g, std::size_t p, std::size_t i, std::size_t j) const {
        return qv[g][(p * dim + i) * dim + j];
    }
    /// [S] estimate (last generation) at grid point p.
    double limit(std::size_t p, std::size_t i, std::size_t j) const {
        return at(qv.size() - 1, p, i, j);
    }
    /// [S^i, S^j]_T of the estimate.
    double limit_T(std::size_t i, std::size_t j) const { return limit(grid.size() - 1, i, j); }
    /// |[S]_T| = (sum_{i,j} [S^i,S^j]_T^2)^{1/2}.
    double limit_norm_T() const;
    /// Grid index of the last grid point <= t.
    std::size_t grid_index(double t) const;
};

QVReport qv_limit(const Path& path, int n_max, double tol);

/// Z^n_t = Q^n_t - Q^{n-1}_t for a 1-d path, with Q^0 := 0.
double z_process(const Path& path, int n, double t);

/// Everything the Section-3 auxiliary processes need for one generation of a
/// 1-d path: pi_n, pi_{n-1}, and Z^n at the times of pi_n.
class ZProcess {
public:
    ZProcess(const Path& path, int n);

    double z(double t) const;
    const LebesguePartition& fine() const { return fine_; }
    const LebesguePartition* coarse() const { return n_ > 1 ? &coarse_ : nullptr; }
    /// Z^n at tau^n_k.
    double z_at(std::size_t k) const { return z_tau_[k]; }
    /// sum_{i=1}^{k} (Z_{tau_i} - Z_{tau_{i-1}})^2
    double cum_sq(std::size_t k) const { return cum_sq_[k]; }

    /// K^n_t with constant n^4 2^{-2n} + 2^{-n+5} (K + psi(K))^2.
    double k_process(double K, const PsiSpec& psi, double t) const;
    static double k_constant(int n, double K, const PsiSpec& psi);
    /// sigma^n_K or kNever.
    double sigma(double K) const;

private:
    const Path* path_;
    int n_;
    LebesguePartition fine_, coarse_;
    QuadraticSum q_fine_;
    std::optional<QuadraticSum> q_coarse_;
    std::vector<double> z_tau_;
    std::vector<double> cum_sq_;
};

double k_process(const Path& path, int n, double K, const PsiSpec& psi, double t);
double sigma_n_K(const Path& path, int n, double K);

struct JumpIdentityVerdict {
    bool pass = true;
    double max_discrepancy = 0.0;
    double worst_time = 0.0;
};

/// Compares the jump of the [S] estimate at every event with Delta S^i Delta S^j.
JumpIdentityVerdict jump_identity_check(const Path& path, const QVReport& report,
                                        double tol = 1e-12);

}  // namespace pathcalc
