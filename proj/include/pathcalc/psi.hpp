#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pathcalc {

/// Non-decreasing bound psi: R+ -> R+ on the size of downward jumps.
///
/// Families:
///   constant  psi(x) = c
///   affine    psi(x) = a + b x
///   power     psi(x) = a x^p
///   table     piecewise-linear through sorted (x, y) knots, flat outside
class PsiSpec {
public:
    enum class Family { Constant, Affine, Power, Table };

    static PsiSpec constant(double c);
    static PsiSpec affine(double a, double b);
    static PsiSpec power(double a, double p);
    static PsiSpec table(std::vector<std::pair<double, double>> knots);

    /// Parses "constant:0.5", "affine:1,1", "power:2,0.5" or
    /// "table:0,0;1,1;2,3".
    static PsiSpec parse(const std::string& text);

    double operator()(double x) const;

    Family family() const noexcept { return family_; }
    const std::vector<double>& params() const noexcept { return params_; }
    std::string family_name() const;
    std::string to_string() const;

    friend bool operator==(const PsiSpec&, const PsiSpec&) = default;

private:
    PsiSpec(Family family, std::vector<double> params);
    Family family_ = Family::Constant;
    // table knots are stored flattened as x0, y0, x1, y1, ...
    std::vector<double> params_;
};

PsiSpec psi_from_family(const std::string& family, std::vector<double> params);

}  // namespace pathcalc
