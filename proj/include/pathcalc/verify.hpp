#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathcalc/psi.hpp"

namespace pathcalc {

struct CheckResult {
    std::string name;
    bool pass = true;
    nlohmann::json details;
};

struct VerifyOptions {
    std::size_t count = 0;  // 0 keeps the check's own default
    std::uint64_t seed = 7;
    PsiSpec psi = PsiSpec::affine(1.0, 1.0);
};

/// bdg, k_identity, doob, hoeffding, purejump, ito, concentration, cadlag_bdg,
/// qv_brownian, crossings, continuity.
const std::vector<std::string>& check_names();

/// Runs one named check. Exact identities that break throw
/// InternalConsistencyError; statistical shortfalls only clear `pass`.
CheckResult run_check(const std::string& name, const VerifyOptions& options);

}  // namespace pathcalc
