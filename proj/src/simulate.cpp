#include "pathcalc/simulate.hpp"

#include <cmath>

#include "pathcalc/errors.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/path_io.hpp"
#include "pathcalc/rng.hpp"

namespace pathcalc {

std::string to_string(SimKind kind) {
    switch (kind) {
        case SimKind::Brownian: return "brownian";
        case SimKind::GeometricBrownian: return "geometric-brownian";
        case SimKind::JumpDiffusion: return "jump-diffusion";
        case SimKind::Oscillator: return "oscillator";
        case SimKind::Constant: return "constant";
    }
    return "brownian";
}

SimKind sim_kind_from_string(const std::string& s) {
    if (s == "brownian") return SimKind::Brownian;
    if (s == "geometric-brownian") return SimKind::GeometricBrownian;
    if (s == "jump-diffusion") return SimKind::JumpDiffusion;
    if (s == "oscillator") return SimKind::Oscillator;
    if (s == "constant") return SimKind::Constant;
    throw ContractError("unknown simulation kind '" + s + "'");
}

void SimSpec::validate() const {
    if (steps < 1) throw ContractError("steps must be at least 1");
    if (!(volatility >= 0.0) || !std::isfinite(volatility)) {
        throw ContractError("volatility must be finite and non-negative");
    }
    if (!(jump_intensity >= 0.0) || !std::isfinite(jump_intensity)) {
        throw ContractError("jump intensity must be finite and non-negative");
    }
    if (!(jump_std >= 0.0)) throw ContractError("jump std must be non-negative");
    if (dim < 1) throw ContractError("dim must be at least 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ContractError("horizon must be positive");
    if (!std::isfinite(drift) || !std::isfinite(jump_mean) || !std::isfinite(amplitude) ||
        !std::isfinite(value)) {
        throw ContractError("simulation parameters must be finite");
    }
    if (x0 && !std::isfinite(*x0)) throw ContractError("x0 must be finite");
    if (kind == SimKind::GeometricBrownian && x0 && !(*x0 > 0.0)) {
        throw ContractError("geometric-brownian needs x0 > 0");
    }
    if (nonnegative && x0 && *x0 < 0.0) throw ContractError("nonnegative paths need x0 >= 0");
    if (nonnegative && kind == SimKind::Brownian) {
        throw ContractError("brownian paths cannot be kept nonnegative");
    }
    if (nonnegative && ((kind == SimKind::Oscillator && amplitude < 0.0) ||
                        (kind == SimKind::Constant && value < 0.0))) {
        throw ContractError("nonnegative paths need nonnegative values");
    }
}

Interp SimSpec::effective_mode() const {
    if (mode) return *mode;
    return (kind == SimKind::Brownian || kind == SimKind::GeometricBrownian) ? Interp::Linear
                                                                           : Interp::Step;
}

SampleSpaceSpec SimSpec::sample_space() const {
    SampleSpaceSpec s;
    s.psi = psi;
    s.dim = dim;
    s.horizon = horizon;
    if (kind == SimKind::GeometricBrownian || nonnegative) s.base = BaseSet::Nonnegative;
    else if (effective_mode() == Interp::Linear) s.base = BaseSet::Continuous;
    return s;
}

nlohmann::json to_json(const SimSpec& settings) {
    nlohmann::json j;
    j["kind"] = to_string(settings.kind);
    j["steps"] = settings.steps;
    j["drift"] = settings.drift;
    j["volatility"] = settings.volatility;
    j["jump_intensity"] = settings.jump_intensity;
    j["jump_mean"] = settings.jump_mean;
    j["jump_std"] = settings.jump_std;
    j["seed"] = settings.seed;
    j["dim"] = settings.dim;
    j["horizon"] = settings.horizon;
    j["psi"] = psi_to_json(settings.psi);
    if (settings.x0) j["x0"] = *settings.x0;
    j["amplitude"] = settings.amplitude;
    j["value"] = settings.value;
    j["nonnegative"] = settings.nonnegative;
    j["mode"] = to_string(settings.effective_mode());
    return j;
}

SimSpec sim_spec_from_json(const nlohmann::json& j) {
    SimSpec s;
    try {
        if (j.contains("kind")) s.kind = sim_kind_from_string(j["kind"].get<std::string>());
        s.steps = j.value("steps", s.steps);
        s.drift = j.value("drift", s.drift);
        s.volatility = j.value("volatility", s.volatility);
        s.jump_intensity = j.value("jump_intensity", s.jump_intensity);
        s.jump_mean = j.value("jump_mean", s.jump_mean);
        s.jump_std = j.value("jump_std", s.jump_std);
        s.seed = j.value("seed", s.seed);
        s.dim = j.value("dim", s.dim);
        s.horizon = j.value("horizon", s.horizon);
        if (j.contains("psi")) s.psi = psi_from_json(j["psi"]);
        if (j.contains("x0")) s.x0 = j["x0"].get<double>();
        s.amplitude = j.value("amplitude", s.amplitude);
        s.value = j.value("value", s.value);
        s.nonnegative = j.value("nonnegative", s.nonnegative);
        if (j.contains("mode")) s.mode = interp_from_string(j["mode"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ContractError(std::string("bad simulation settings: ") + e.what());
    }
    s.validate();
    return s;
}

namespace {

/// Raises every downward move so that it respects psi(running sup of |x|).
/// Only raises values, so a zero floor applied earlier is preserved.
void enforce_psi(std::vector<double>& values, std::size_t dim, const PsiSpec& psi) {
    const std::size_t m = values.size() / dim;
    double running = norm(std::span<const double>(values.data(), dim));
    for (std::size_t k = 1; k < m; ++k) {
        const double bound = psi(running);
        for (std::size_t i = 0; i < dim; ++i) {
            const double before = values[(k - 1) * dim + i];
            double& after = values[k * dim + i];
            if (before - after > bound) {
                after = before - bound;
                while (before - after > bound) after = std::nextafter(after, HUGE_VAL);
            }
        }
        running = std::max(running, norm(std::span<const double>(values.data() + k * dim, dim)));
    }
}

}  // namespace

Path simulate(const SimSpec& settings) { return simulate(settings, 0); }

Path simulate(const SimSpec& settings, std::uint64_t stream) {
    settings.validate();
    const std::size_t d = settings.dim;
    const Interp mode = settings.effective_mode();

    if (settings.kind == SimKind::Constant) {
        return Path(d, settings.horizon, {0.0}, Vec(d, settings.value), mode);
    }

    const std::size_t n = settings.steps;
    std::vector<double> times(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        times[k] = settings.horizon * static_cast<double>(k) / static_cast<double>(n);
    }
    std::vector<double> values((n + 1) * d);

    if (settings.kind == SimKind::Oscillator) {
        for (std::size_t k = 0; k <= n; ++k) {
            for (std::size_t i = 0; i < d; ++i) values[k * d + i] = (k % 2 == 1) ? settings.amplitude : 0.0;
        }
    } else {
        PhiloxStream rng(settings.seed, stream);
        const double dt = settings.horizon / static_cast<double>(n);
        const double sq = std::sqrt(dt);
        const double start =
            settings.x0 ? *settings.x0 : (settings.kind == SimKind::GeometricBrownian ? 1.0 : 0.0);
        for (std::size_t i = 0; i < d; ++i) values[i] = start;
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t i = 0; i < d; ++i) {
                const double prev = values[(k - 1) * d + i];
                const double z = rng.normal();
                double next = 0.0;
                switch (settings.kind) {
                    case SimKind::Brownian:
                        next = prev + settings.drift * dt + settings.volatility * sq * z;
                        break;
                    case SimKind::GeometricBrownian: {
                        const double s = settings.volatility;
                        next = prev * std::exp((settings.drift - 0.5 * s * s) * dt + s * sq * z);
                        break;
                    }
                    case SimKind::JumpDiffusion: {
                        next = prev + settings.drift * dt + settings.volatility * sq * z;
                        const std::uint32_t jumps = rng.poisson(settings.jump_intensity * dt);
                        for (std::uint32_t j = 0; j < jumps; ++j) {
                            next += settings.jump_mean + settings.jump_std * rng.normal();
                        }
                        if (settings.nonnegative) next = std::max(next, 0.0);
                        break;
                    }
                    default:
                        break;
                }
                values[k * d + i] = next;
            }
        }
    }

    if (mode == Interp::Step) enforce_psi(values, d, settings.psi);
    return Path(d, settings.horizon, std::move(times), std::move(values), mode);
}

std::vector<Path> ensemble(const SimSpec& settings, std::size_t count) {
    if (count < 1) throw ContractError("ensemble size must be at least 1");
    settings.validate();
    std::vector<std::optional<Path>> slots(count);
    parallel_for(count, [&](std::size_t i) { slots[i].emplace(simulate(settings, i)); });
    std::vector<Path> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace pathcalc
