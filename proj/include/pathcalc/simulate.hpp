#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathcalc/path.hpp"

namespace pathcalc {

enum class SimKind { Brownian, GeometricBrownian, JumpDiffusion, Oscillator, Constant };

std::string to_string(SimKind kind);
SimKind sim_kind_from_string(const std::string& s);

struct SimSpec {
    SimKind kind = SimKind::Brownian;
    std::size_t steps = 1000;
    double drift = 0.0;
    double volatility = 1.0;
    double jump_intensity = 0.0;  // expected jumps per unit time
    double jump_mean = 0.0;
    double jump_std = 0.1;
    std::uint64_t seed = 0;
    std::size_t dim = 1;
    double horizon = 1.0;
    PsiSpec psi = PsiSpec::affine(1.0, 1.0);
    /// Starting value; geometric-brownian uses 1 when unset.
    std::optional<double> x0;
    double amplitude = 1.0;  // oscillator
    double value = 0.0;      // constant
    bool nonnegative = false;  // floor jump-diffusion values at zero
    /// Overrides the kind's natural interpolation mode when set.
    std::optional<Interp> mode;

    void validate() const;
    Interp effective_mode() const;
    SampleSpaceSpec sample_space() const;
};

nlohmann::json to_json(const SimSpec& settings);
SimSpec sim_spec_from_json(const nlohmann::json& j);

/// Path for stream 0 of settings.seed.
Path simulate(const SimSpec& settings);
/// Path for an explicit stream index of settings.seed.
Path simulate(const SimSpec& settings, std::uint64_t stream);
/// ensemble(settings, n)[i] == simulate(settings, i); generated in parallel.
std::vector<Path> ensemble(const SimSpec& settings, std::size_t count);

}  // namespace pathcalc
