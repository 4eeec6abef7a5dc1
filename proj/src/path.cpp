#include "pathcalc/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "pathcalc/errors.hpp"

namespace pathcalc {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
        h ^= p[k];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::string to_string(Interp mode) { return mode == Interp::Step ? "step" : "linear"; }

Interp interp_from_string(const std::string& s) {
    if (s == "step") return Interp::Step;
    if (s == "linear") return Interp::Linear;
    throw ContractError("unknown interpolation mode '" + s + "'");
}

Path::Path(std::size_t dim, double horizon, std::vector<double> times,
           std::vector<double> values, Interp mode)
    : dim_(dim), horizon_(horizon), times_(std::move(times)), values_(std::move(values)),
      mode_(mode) {
    if (dim_ == 0) throw ContractError("path dimension must be positive");
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw ContractError("path horizon must be finite and positive");
    }
    if (times_.empty()) throw ContractError("path needs at least one event");
    if (times_.front() != 0.0) throw ContractError("first event time must be 0");
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) {
            throw ContractError("event times must be strictly increasing");
        }
    }
    if (!(times_.back() <= horizon_)) throw ContractError("event time beyond horizon");
    if (values_.size() != times_.size() * dim_) {
        throw ContractError("value table size does not match events x dim");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ContractError("path values must be finite");
    }

    std::uint64_t h = 1469598103934665603ULL;
    const int m = mode_ == Interp::Step ? 0 : 1;
    h = fnv1a(h, &dim_, sizeof dim_);
    h = fnv1a(h, &horizon_, sizeof horizon_);
    h = fnv1a(h, &m, sizeof m);
    h = fnv1a(h, times_.data(), times_.size() * sizeof(double));
    h = fnv1a(h, values_.data(), values_.size() * sizeof(double));
    fingerprint_ = h;
}

Path Path::scalar(double horizon, std::vector<double> times, std::vector<double> values,
                  Interp mode) {
    return Path(1, horizon, std::move(times), std::move(values), mode);
}

void Path::check_time(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        throw DomainError("time " + std::to_string(t) + " outside [0, T]");
    }
}

std::size_t Path::segment(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double Path::eval(double t, std::size_t i) const {
    check_time(t);
    if (i >= dim_) throw ContractError("coordinate index out of range");
    const std::size_t k = segment(t);
    const double vk = values_[k * dim_ + i];
    if (mode_ == Interp::Step || k + 1 == times_.size() || t == times_[k]) return vk;
    const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return vk + w * (values_[(k + 1) * dim_ + i] - vk);
}

Vec Path::eval(double t) const {
    Vec out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = eval(t, i);
    return out;
}

double Path::left_limit(double t, std::size_t i) const {
    if (!(t > 0.0)) throw DomainError("left limit undefined at t <= 0");
    check_time(t);
    if (mode_ == Interp::Linear) return eval(t, i);
    if (i >= dim_) throw ContractError("coordinate index out of range");
    const std::size_t k = segment(t);
    if (times_[k] == t) return values_[(k - 1) * dim_ + i];
    return values_[k * dim_ + i];
}

Vec Path::left_limit(double t) const {
    Vec out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = left_limit(t, i);
    return out;
}

Vec Path::jump(double t) const {
    Vec out = eval(t);
    const Vec left = left_limit(t);
    for (std::size_t i = 0; i < dim_; ++i) out[i] -= left[i];
    return out;
}

Path Path::component(std::size_t i) const {
    if (i >= dim_) throw ContractError("coordinate index out of range");
    std::vector<double> vals(times_.size());
    for (std::size_t k = 0; k < times_.size(); ++k) vals[k] = values_[k * dim_ + i];
    return Path(1, horizon_, times_, std::move(vals), mode_);
}

Path Path::coordinate_sum(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw ContractError("coordinate index out of range");
    if (i == j) throw ContractError("coordinate_sum needs distinct coordinates");
    std::vector<double> vals(times_.size());
    for (std::size_t k = 0; k < times_.size(); ++k) {
        vals[k] = values_[k * dim_ + i] + values_[k * dim_ + j];
    }
    return Path(1, horizon_, times_, std::move(vals), mode_);
}

Path Path::scaled(double factor) const {
    std::vector<double> vals = values_;
    for (double& v : vals) v *= factor;
    return Path(dim_, horizon_, times_, std::move(vals), mode_);
}

bool operator==(const Path& a, const Path& b) {
    return a.dim_ == b.dim_ && a.horizon_ == b.horizon_ && a.mode_ == b.mode_ &&
           a.times_ == b.times_ && a.values_ == b.values_;
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double sup_norm(const Path& path) {
    double best = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) best = std::max(best, norm(path.value(k)));
    return best;
}

std::string to_string(BaseSet base) {
    switch (base) {
        case BaseSet::AllCadlag: return "all-cadlag";
        case BaseSet::Continuous: return "continuous";
        case BaseSet::Nonnegative: return "nonnegative";
    }
    return "all-cadlag";
}

BaseSet base_set_from_string(const std::string& s) {
    if (s == "all-cadlag") return BaseSet::AllCadlag;
    if (s == "continuous") return BaseSet::Continuous;
    if (s == "nonnegative") return BaseSet::Nonnegative;
    throw ContractError("unknown base set '" + s + "'");
}

std::vector<double> MembershipVerdict::violating_times() const {
    std::vector<double> out;
    for (const auto& v : violations) out.push_back(v.time);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MembershipVerdict check_membership(const Path& path, const SampleSpaceSpec& settings) {
    if (path.dim() != settings.dim) throw ContractError("path dimension does not match sample space");
    constexpr std::size_t kBase = static_cast<std::size_t>(-1);
    MembershipVerdict verdict;
    auto fail = [&](double t, std::size_t i, std::string why) {
        verdict.pass = false;
        verdict.violations.push_back({t, i, std::move(why)});
    };

    const std::size_t d = path.dim();
    if (settings.base == BaseSet::Nonnegative) {
        for (std::size_t k = 0; k < path.size(); ++k) {
            for (std::size_t i = 0; i < d; ++i) {
                if (path.value(k, i) < 0.0) fail(path.time(k), i, "negative value");
            }
        }
    }
    if (path.mode() == Interp::Linear) return verdict;

    double running_sup = norm(path.value(0));
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double bound = settings.psi(running_sup);
        bool jumped = false;
        for (std::size_t i = 0; i < d; ++i) {
            const double before = path.value(k - 1, i);
            const double after = path.value(k, i);
            if (before != after) jumped = true;
            if (before - after > bound) fail(path.time(k), i, "downward jump exceeds psi bound");
        }
        if (jumped && settings.base == BaseSet::Continuous) {
            fail(path.time(k), kBase, "jump in a continuous sample space");
        }
        running_sup = std::max(running_sup, norm(path.value(k)));
    }
    return verdict;
}

}  // namespace pathcalc
