#include "pathcalc/psi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathcalc/errors.hpp"

namespace pathcalc {

namespace {

void require_nonnegative(const std::vector<double>& params) {
    for (double p : params) {
        if (!std::isfinite(p) || p < 0.0) {
            throw ContractError("psi parameters must be finite and non-negative");
        }
    }
}

std::vector<double> parse_numbers(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw ContractError("bad number");
        } catch (const std::exception&) {
            throw ContractError("psi: cannot parse number '" + item + "'");
        }
    }
    return out;
}

}  // namespace

PsiSpec::PsiSpec(Family family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
    require_nonnegative(params_);
}

PsiSpec PsiSpec::constant(double c) { return PsiSpec(Family::Constant, {c}); }

PsiSpec PsiSpec::affine(double a, double b) { return PsiSpec(Family::Affine, {a, b}); }

PsiSpec PsiSpec::power(double a, double p) { return PsiSpec(Family::Power, {a, p}); }

PsiSpec PsiSpec::table(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw ContractError("psi table needs at least one knot");
    std::vector<double> flat;
    flat.reserve(2 * knots.size());
    for (std::size_t k = 0; k < knots.size(); ++k) {
        if (k > 0 && !(knots[k].first > knots[k - 1].first)) {
            throw ContractError("psi table x values must be strictly increasing");
        }
        if (k > 0 && knots[k].second < knots[k - 1].second) {
            throw ContractError("psi table must be non-decreasing");
        }
        flat.push_back(knots[k].first);
        flat.push_back(knots[k].second);
    }
    return PsiSpec(Family::Table, std::move(flat));
}

double PsiSpec::operator()(double x) const {
    x = std::max(x, 0.0);
    switch (family_) {
        case Family::Constant:
            return params_[0];
        case Family::Affine:
            return params_[0] + params_[1] * x;
        case Family::Power:
            return params_[0] * std::pow(x, params_[1]);
        case Family::Table: {
            const std::size_t n = params_.size() / 2;
            if (x <= params_[0]) return params_[1];
            if (x >= params_[2 * (n - 1)]) return params_[2 * (n - 1) + 1];
            std::size_t k = 1;
            while (params_[2 * k] < x) ++k;
            const double x0 = params_[2 * (k - 1)], y0 = params_[2 * (k - 1) + 1];
            const double x1 = params_[2 * k], y1 = params_[2 * k + 1];
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return 0.0;
}

std::string PsiSpec::family_name() const {
    switch (family_) {
        case Family::Constant: return "constant";
        case Family::Affine: return "affine";
        case Family::Power: return "power";
        case Family::Table: return "table";
    }
    return "constant";
}

std::string PsiSpec::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << family_name() << ':';
    for (std::size_t k = 0; k < params_.size(); ++k) {
        if (k > 0) os << ((family_ == Family::Table && k % 2 == 0) ? ';' : ',');
        os << params_[k];
    }
    return os.str();
}

PsiSpec psi_from_family(const std::string& family, std::vector<double> params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n) {
            throw ContractError("psi family '" + family + "' expects " + std::to_string(n) +
                                " parameters");
        }
    };
    if (family == "constant") {
        need(1);
        return PsiSpec::constant(params[0]);
    }
    if (family == "affine") {
        need(2);
        return PsiSpec::affine(params[0], params[1]);
    }
    if (family == "power") {
        need(2);
        return PsiSpec::power(params[0], params[1]);
    }
    if (family == "table") {
        if (params.empty() || params.size() % 2 != 0) {
            throw ContractError("psi table expects an even number of parameters");
        }
        std::vector<std::pair<double, double>> knots;
        for (std::size_t k = 0; k < params.size(); k += 2) knots.emplace_back(params[k], params[k + 1]);
        return PsiSpec::table(std::move(knots));
    }
    throw ContractError("unknown psi family '" + family + "'");
}

PsiSpec PsiSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ContractError("psi must look like family:params");
    const std::string family = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    if (family == "table") std::replace(rest.begin(), rest.end(), ';', ',');
    return psi_from_family(family, parse_numbers(rest, ','));
}

}  // namespace pathcalc
