#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pathcalc/path.hpp"

namespace pathcalc {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
/// Strict parse of a full token; throws IoError on garbage.
double parse_double(std::string_view text);

struct PathFile {
    Path path;
    std::optional<SampleSpaceSpec> space;
};

/// CSV with header t,x1,...,xd. Values are written in shortest round-trip
/// form so read(write(p)) == p bit for bit.
std::string path_to_csv(const Path& path);
Path path_from_csv(const std::string& text, double horizon, Interp mode);

nlohmann::json sidecar_json(const Path& path, const SampleSpaceSpec* space);

void write_path(const std::string& csv_file, const Path& path,
                const SampleSpaceSpec* space = nullptr);

/// Reads csv_file and, when present, the sidecar next to it (same stem,
/// .json). Without a sidecar the path is step mode with horizon = last t.
PathFile read_path(const std::string& csv_file);

std::string read_text(const std::string& file);
void write_text(const std::string& file, const std::string& text);
std::string sidecar_name(const std::string& csv_file);

nlohmann::json psi_to_json(const PsiSpec& psi);
PsiSpec psi_from_json(const nlohmann::json& j);

}  // namespace pathcalc
