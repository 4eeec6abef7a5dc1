#include "pathcalc/path_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathcalc/errors.hpp"

namespace pathcalc {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    double x = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
        throw IoError("cannot parse number '" + std::string(text) + "'");
    }
    return x;
}

std::string path_to_csv(const Path& path) {
    std::string out = "t";
    for (std::size_t i = 0; i < path.dim(); ++i) out += ",x" + std::to_string(i + 1);
    out += '\n';
    for (std::size_t k = 0; k < path.size(); ++k) {
        out += format_double(path.time(k));
        for (std::size_t i = 0; i < path.dim(); ++i) {
            out += ',';
            out += format_double(path.value(k, i));
        }
        out += '\n';
    }
    return out;
}

Path path_from_csv(const std::string& text, double horizon, Interp mode) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty path file");
    std::size_t dim = 0;
    {
        std::stringstream ss(line);
        std::string col;
        std::getline(ss, col, ',');
        if (!col.empty() && col.back() == '\r') col.pop_back();
        if (col != "t") throw IoError("path header must start with 't'");
        while (std::getline(ss, col, ',')) ++dim;
    }
    if (dim == 0) throw IoError("path header has no value columns");

    std::vector<double> times;
    std::vector<double> values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            const double x = parse_double(cell);
            if (col == 0) times.push_back(x); else values.push_back(x);
            ++col;
        }
        if (col != dim + 1) {
            throw IoError("row " + std::to_string(lineno) + " has wrong column count");
        }
    }
    if (times.empty()) throw IoError("path file has no rows");
    if (horizon <= 0.0) horizon = times.back() > 0.0 ? times.back() : 1.0;
    try {
        return Path(dim, horizon, std::move(times), std::move(values), mode);
    } catch (const ContractError& e) {
        throw IoError(std::string("invalid path data: ") + e.what());
    }
}

nlohmann::json psi_to_json(const PsiSpec& psi) {
    return {{"family", psi.family_name()}, {"params", psi.params()}};
}

PsiSpec psi_from_json(const nlohmann::json& j) {
    if (j.is_string()) return PsiSpec::parse(j.get<std::string>());
    return psi_from_family(j.at("family").get<std::string>(),
                           j.at("params").get<std::vector<double>>());
}

nlohmann::json sidecar_json(const Path& path, const SampleSpaceSpec* space) {
    nlohmann::json j;
    j["dim"] = path.dim();
    j["horizon"] = path.horizon();
    j["mode"] = to_string(path.mode());
    if (space) {
        j["psi"] = psi_to_json(space->psi);
        j["base"] = to_string(space->base);
    }
    return j;
}

std::string sidecar_name(const std::string& csv_file) {
    std::filesystem::path p(csv_file);
    p.replace_extension(".json");
    return p.string();
}

std::string read_text(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open '" + file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + file + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + file + "'");
}

void write_path(const std::string& csv_file, const Path& path, const SampleSpaceSpec* space) {
    write_text(csv_file, path_to_csv(path));
    write_text(sidecar_name(csv_file), sidecar_json(path, space).dump(2) + "\n");
}

PathFile read_path(const std::string& csv_file) {
    const std::string text = read_text(csv_file);
    const std::string side = sidecar_name(csv_file);
    if (!std::filesystem::exists(side)) {
        return {path_from_csv(text, 0.0, Interp::Step), std::nullopt};
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(side));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad sidecar '" + side + "': " + e.what());
    }
    try {
        const double horizon = j.value("horizon", 0.0);
        const Interp mode = interp_from_string(j.value("mode", std::string("step")));
        Path path = path_from_csv(text, horizon, mode);
        if (j.contains("dim") && j["dim"].get<std::size_t>() != path.dim()) {
            throw IoError("sidecar dim does not match csv columns");
        }
        std::optional<SampleSpaceSpec> space;
        if (j.contains("psi") || j.contains("base")) {
            SampleSpaceSpec s;
            if (j.contains("psi")) s.psi = psi_from_json(j["psi"]);
            if (j.contains("base")) s.base = base_set_from_string(j["base"].get<std::string>());
            s.dim = path.dim();
            s.horizon = path.horizon();
            space = s;
        }
        return {std::move(path), space};
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad sidecar '" + side + "': " + e.what());
    } catch (const ContractError& e) {
        throw IoError("bad sidecar '" + side + "': " + e.what());
    }
}

}  // namespace pathcalc
