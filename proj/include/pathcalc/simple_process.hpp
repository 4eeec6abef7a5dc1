#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pathcalc/path.hpp"

namespace pathcalc {

/// Per-path realization of a simple strategy. Position h_k is held on
/// (tau_k, tau_{k+1}], the last one until the horizon. Appending a time with a
/// zero position ends trading.
struct RealizedStrategy {
    std::size_t dim = 1;
    std::vector<double> times;
    std::vector<double> positions;  // times.size() * dim, row-major

    static RealizedStrategy zero(std::size_t dim);
    static RealizedStrategy constant(const Vec& h);

    std::size_t size() const noexcept { return times.size(); }
    std::span<const double> position(std::size_t k) const {
        return {positions.data() + k * dim, dim};
    }
    /// Position held at t > 0, i.e. on the interval (tau_k, tau_{k+1}] containing t.
    Vec position_at(double t) const;
    /// Value on the interval starting just after t.
    Vec position_after(double t) const;

    void append(double t, std::span<const double> h);
    /// Throws ContractError unless times increase strictly and sizes agree.
    void validate() const;
    /// Positions forced to zero after u.
    RealizedStrategy stopped_at(double u) const;
    /// Drops redundant times where the position does not change.
    RealizedStrategy compacted() const;
};

/// a*A + b*B on the merged decision times.
RealizedStrategy combine(double a, const RealizedStrategy& A, double b, const RealizedStrategy& B);

/// Step integrand F_0 1_{0} + sum F_{sigma_i} 1_{(sigma_i, sigma_{i+1}]}.
struct StepIntegrand {
    Vec f0;
    RealizedStrategy body;

    static StepIntegrand constant(const Vec& value);
    std::size_t dim() const noexcept { return body.dim; }
    /// sup_t |F_t| over [0, T].
    double sup_norm(double horizon) const;
    StepIntegrand shifted(const Vec& offset) const;
};

StepIntegrand combine(double a, const StepIntegrand& F, double b, const StepIntegrand& G);

/// Sorted union of several time lists, duplicates removed, restricted to [0, T].
std::vector<double> merge_times(std::initializer_list<std::span<const double>> lists,
                                double horizon);

/// O(log N) evaluation of (H.S)_t through prefix sums.
class CapitalEvaluator {
public:
    CapitalEvaluator(const RealizedStrategy& strategy, const Path& path);
    double operator()(double t) const;

private:
    const RealizedStrategy* strategy_;
    const Path* path_;
    std::vector<double> times_;
    std::vector<Vec> s_at_;
    std::vector<double> prefix_;
};

double capital(const RealizedStrategy& strategy, const Path& path, double t);

/// (H.S) sampled on the merged grid of strategy times, path events and any
/// extra times. Between grid points the curve moves only through S, so in
/// linear mode it is affine and in step mode constant.
struct CapitalCurve {
    std::vector<double> times;
    std::vector<double> values;

    double min() const;
    double max_abs() const;
    double at(double t) const;
};

CapitalCurve capital_curve(const RealizedStrategy& strategy, const Path& path,
                           std::span<const double> extra_times = {});

}  // namespace pathcalc
