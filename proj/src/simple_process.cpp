#include "pathcalc/simple_process.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/errors.hpp"

namespace pathcalc {

RealizedStrategy RealizedStrategy::zero(std::size_t dim) {
    return RealizedStrategy{dim, {0.0}, Vec(dim, 0.0)};
}

RealizedStrategy RealizedStrategy::constant(const Vec& h) {
    return RealizedStrategy{h.size(), {0.0}, h};
}

Vec RealizedStrategy::position_at(double t) const {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return Vec(dim, 0.0);
    const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
    const auto p = position(k);
    return Vec(p.begin(), p.end());
}

Vec RealizedStrategy::position_after(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return Vec(dim, 0.0);
    const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
    const auto p = position(k);
    return Vec(p.begin(), p.end());
}

void RealizedStrategy::append(double t, std::span<const double> h) {
    if (h.size() != dim) throw ContractError("position has wrong dimension");
    if (!times.empty() && !(t > times.back())) {
        throw ContractError("strategy times must increase strictly");
    }
    times.push_back(t);
    positions.insert(positions.end(), h.begin(), h.end());
}

void RealizedStrategy::validate() const {
    if (dim == 0) throw ContractError("strategy dimension must be positive");
    if (positions.size() != times.size() * dim) {
        throw ContractError("strategy positions do not match its times");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0)) throw ContractError("strategy times must be >= 0");
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw ContractError("strategy times must increase strictly");
        }
    }
    for (double h : positions) {
        if (!std::isfinite(h)) throw ContractError("strategy positions must be finite");
    }
}

RealizedStrategy RealizedStrategy::stopped_at(double u) const {
    RealizedStrategy out{dim, {}, {}};
    const Vec zero(dim, 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] >= u) break;
        out.append(times[k], position(k));
    }
    if (is_never(u)) return out;
    out.append(u, zero);
    return out;
}

RealizedStrategy RealizedStrategy::compacted() const {
    RealizedStrategy out{dim, {}, {}};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto p = position(k);
        if (k > 0 && std::equal(p.begin(), p.end(), out.positions.end() - dim)) continue;
        out.append(times[k], p);
    }
    return out;
}

RealizedStrategy combine(double a, const RealizedStrategy& A, double b,
                         const RealizedStrategy& B) {
    if (A.dim != B.dim) throw ContractError("cannot combine strategies of different dimension");
    std::vector<double> ts(A.times);
    ts.insert(ts.end(), B.times.begin(), B.times.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    RealizedStrategy out{A.dim, {}, {}};
    for (double t : ts) {
        const Vec ha = A.position_after(t);
        const Vec hb = B.position_after(t);
        Vec h(A.dim);
        for (std::size_t i = 0; i < A.dim; ++i) h[i] = a * ha[i] + b * hb[i];
        out.append(t, h);
    }
    if (out.times.empty()) return RealizedStrategy::zero(A.dim);
    return out;
}

StepIntegrand StepIntegrand::constant(const Vec& value) {
    return StepIntegrand{value, RealizedStrategy::constant(value)};
}

double StepIntegrand::sup_norm(double horizon) const {
    double best = norm(f0);
    for (std::size_t k = 0; k < body.size(); ++k) {
        if (body.times[k] >= horizon) break;
        best = std::max(best, norm(body.position(k)));
    }
    return best;
}

StepIntegrand StepIntegrand::shifted(const Vec& offset) const {
    if (offset.size() != dim()) throw ContractError("offset has wrong dimension");
    StepIntegrand out = *this;
    for (std::size_t i = 0; i < dim(); ++i) out.f0[i] += offset[i];
    for (std::size_t k = 0; k < out.body.size(); ++k) {
        for (std::size_t i = 0; i < dim(); ++i) out.body.positions[k * dim() + i] += offset[i];
    }
    if (out.body.times.empty() || out.body.times.front() > 0.0) {
        // the body must cover (0, sigma_1] for the shift to apply there
        RealizedStrategy fixed{dim(), {0.0}, offset};
        for (std::size_t k = 0; k < out.body.size(); ++k) {
            fixed.append(out.body.times[k], out.body.position(k));
        }
        out.body = std::move(fixed);
    }
    return out;
}

StepIntegrand combine(double a, const StepIntegrand& F, double b, const StepIntegrand& G) {
    if (F.dim() != G.dim()) throw ContractError("cannot combine integrands of different dimension");
    StepIntegrand out;
    out.f0.resize(F.dim());
    for (std::size_t i = 0; i < F.dim(); ++i) out.f0[i] = a * F.f0[i] + b * G.f0[i];
    out.body = combine(a, F.body, b, G.body);
    return out;
}

std::vector<double> merge_times(std::initializer_list<std::span<const double>> lists,
                                double horizon) {
    std::vector<double> out;
    for (const auto& l : lists) {
        for (double t : l) {
            if (t >= 0.0 && t <= horizon) out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CapitalEvaluator::CapitalEvaluator(const RealizedStrategy& strategy, const Path& path)
    : strategy_(&strategy), path_(&path) {
    strategy.validate();
    if (strategy.dim != path.dim()) throw ContractError("strategy and path dimensions differ");
    const std::size_t d = path.dim();
    for (std::size_t k = 0; k < strategy.size(); ++k) {
        if (strategy.times[k] > path.horizon()) break;
        times_.push_back(strategy.times[k]);
        s_at_.push_back(path.eval(strategy.times[k]));
    }
    prefix_.assign(times_.size() + 1, 0.0);
    for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
        const auto h = strategy.position(k);
        double inc = 0.0;
        for (std::size_t i = 0; i < d; ++i) inc += h[i] * (s_at_[k + 1][i] - s_at_[k][i]);
        prefix_[k + 1] = prefix_[k] + inc;
    }
}

double CapitalEvaluator::operator()(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
    if (times_[k] == t) return prefix_[k];
    const auto h = strategy_->position(k);
    double inc = 0.0;
    for (std::size_t i = 0; i < path_->dim(); ++i) {
        if (h[i] != 0.0) inc += h[i] * (path_->eval(t, i) - s_at_[k][i]);
    }
    return prefix_[k] + inc;
}

double capital(const RealizedStrategy& strategy, const Path& path, double t) {
    return CapitalEvaluator(strategy, path)(t);
}

double CapitalCurve::min() const {
    double m = 0.0;
    for (double v : values) m = std::min(m, v);
    return m;
}

double CapitalCurve::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double CapitalCurve::at(double t) const {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end() || *it != t) throw DomainError("time not on the capital grid");
    return values[static_cast<std::size_t>(it - times.begin())];
}

CapitalCurve capital_curve(const RealizedStrategy& strategy, const Path& path,
                           std::span<const double> extra_times) {
    CapitalEvaluator eval(strategy, path);
    CapitalCurve curve;
    curve.times = merge_times({strategy.times, path.times(), extra_times}, path.horizon());
    curve.values.reserve(curve.times.size());
    for (double t : curve.times) curve.values.push_back(eval(t));
    return curve;
}

}  // namespace pathcalc
