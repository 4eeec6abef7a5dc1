#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathcalc/psi.hpp"

namespace pathcalc {

using Vec = std::vector<double>;

/// Sentinel returned by hitting times that never fire on [0, T]
/// ("inf of the empty set").
inline constexpr double kNever = std::numeric_limits<double>::infinity();

inline bool is_never(double t) noexcept { return t == kNever; }

enum class Interp { Step, Linear };

std::string to_string(Interp mode);
Interp interp_from_string(const std::string& s);

/// Finite-event cadlag trajectory in R^d.
///
/// Step mode holds v_k on [t_k, t_{k+1}) and v_m on [t_m, T]. Linear mode is
/// the piecewise-linear interpolant, constant after the last event.
/// Immutable once built.
class Path {
public:
    Path(std::size_t dim, double horizon, std::vector<double> times,
         std::vector<double> values, Interp mode);

    /// Convenience constructor for one-dimensional paths.
    static Path scalar(double horizon, std::vector<double> times,
                       std::vector<double> values, Interp mode = Interp::Step);

    std::size_t dim() const noexcept { return dim_; }
    double horizon() const noexcept { return horizon_; }
    Interp mode() const noexcept { return mode_; }
    std::size_t size() const noexcept { return times_.size(); }

    std::span<const double> times() const noexcept { return times_; }
    /// Row-major event values, size() * dim().
    std::span<const double> values() const noexcept { return values_; }
    double time(std::size_t k) const { return times_[k]; }
    std::span<const double> value(std::size_t k) const {
        return {values_.data() + k * dim_, dim_};
    }
    double value(std::size_t k, std::size_t i) const { return values_[k * dim_ + i]; }

    /// Index of the last event time <= t (t >= 0).
    std::size_t segment(double t) const;

    Vec eval(double t) const;
    double eval(double t, std::size_t i) const;
    Vec left_limit(double t) const;
    double left_limit(double t, std::size_t i) const;
    Vec jump(double t) const;

    /// Coordinate i as a one-dimensional path on the same events.
    Path component(std::size_t i) const;
    /// One-dimensional path with values x^i + x^j (i != j).
    Path coordinate_sum(std::size_t i, std::size_t j) const;
    Path scaled(double factor) const;

    /// 64-bit fingerprint of the event table, used to tie derived objects to
    /// the path they were computed from.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

    friend bool operator==(const Path& a, const Path& b);

private:
    void check_time(double t) const;

    std::size_t dim_;
    double horizon_;
    std::vector<double> times_;
    std::vector<double> values_;
    Interp mode_;
    std::uint64_t fingerprint_ = 0;
};

/// Euclidean norm of a vector.
double norm(std::span<const double> v);

/// sup_t |w(t)|, exact for both modes (max over the event table).
double sup_norm(const Path& path);

enum class BaseSet { AllCadlag, Continuous, Nonnegative };

std::string to_string(BaseSet base);
BaseSet base_set_from_string(const std::string& s);

struct SampleSpaceSpec {
    PsiSpec psi = PsiSpec::constant(0.0);
    BaseSet base = BaseSet::AllCadlag;
    std::size_t dim = 1;
    double horizon = 1.0;
};

struct MembershipViolation {
    double time;
    std::size_t coordinate;  // npos-like sentinel for base-set violations
    std::string reason;
};

struct MembershipVerdict {
    bool pass = true;
    std::vector<MembershipViolation> violations;
    /// Distinct violating times in increasing order.
    std::vector<double> violating_times() const;
};

/// Checks w^i(t-) - w^i(t) <= psi(sup_{s<t} |w(s)|) at every event, plus the
/// base-set constraint.
MembershipVerdict check_membership(const Path& path, const SampleSpaceSpec& settings);

}  // namespace pathcalc
