// pathcalc command line front end.
//
// Exit codes: 0 ok, 2 config error, 3 I/O error, 4 internal consistency
// error (an exact identity broke), 5 an empirical check failed.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathcalc/crossings.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/experiments.hpp"
#include "pathcalc/integration.hpp"
#include "pathcalc/partitions.hpp"
#include "pathcalc/path_io.hpp"
#include "pathcalc/quadratic_variation.hpp"
#include "pathcalc/rng.hpp"
#include "pathcalc/simulate.hpp"
#include "pathcalc/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pathcalc;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kConfig = 2, kIo = 3, kInternal = 4, kCheckFailed = 5 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kCommands{"simulate", "qv",     "crossings",
                                         "integrate", "verify", "continuity"};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

std::string json_scalar_token(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

// {"n_max": 20, "check": ["bdg"]} -> --n-max 20 --check bdg
std::vector<std::string> config_tokens(const json& cfg) {
    std::vector<std::string> out;
    if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") continue;
        std::string flag = "--" + key;
        for (char& c : flag) {
            if (c == '_') c = '-';
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back(flag);
        } else if (value.is_array()) {
            for (const auto& v : value) {
                out.push_back(flag);
                out.push_back(json_scalar_token(v));
            }
        } else if (value.is_object()) {
            throw ConfigError("nested config entry not supported: " + key);
        } else {
            out.push_back(flag);
            out.push_back(json_scalar_token(value));
        }
    }
    return out;
}

struct Artifacts {
    fs::path dir;
    void csv(const std::string& name, const std::string& text) const {
        write_text((dir / name).string(), text);
    }
    void json_file(const std::string& name, const nlohmann::json& j) const {
        write_text((dir / name).string(), j.dump(2) + "\n");
    }
};

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string s;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) s += ',';
        s += c;
        first = false;
    }
    return s + '\n';
}

std::string fmt(double x) { return format_double(x); }

Path load_input(const std::string& file) {
    if (file.empty()) throw ConfigError("--input is required");
    return read_path(file).path;
}

// ---- subcommands ----------------------------------------------------------

struct Options {
    std::string output_dir = "out";
    std::string config;
    std::uint64_t seed = 0;
    std::string input;
    int n_max = 20;
    double tol = 1e-9;
    std::string psi = "affine:1,1";
    double K = 1.0;
    double lambda = 1.0;
    std::size_t count = 1;
    double epsilon = 0.25;

    // simulate
    std::string kind = "brownian";
    std::size_t steps = 1000;
    double drift = 0.0, volatility = 1.0;
    double jump_intensity = 0.0, jump_mean = 0.0, jump_std = 0.1;
    std::size_t dim = 1;
    double horizon = 1.0;
    double x0 = 0.0, amplitude = 1.0, value = 0.0;
    bool nonnegative = false;
    std::string mode;

    // crossings / integrate / continuity
    double a = 0.0, b = 1.0, h = 0.0, t = -1.0;
    std::string integrand = "left_limit";
    std::vector<std::string> checks;
    std::string continuity_kind = "continuous";
    int n = 8;
    std::size_t n_trunc = 20;
};

SimSpec sim_spec_from(const Options& o, CLI::App* app) {
    SimSpec s;
    s.kind = sim_kind_from_string(o.kind);
    s.steps = o.steps;
    s.drift = o.drift;
    s.volatility = o.volatility;
    s.jump_intensity = o.jump_intensity;
    s.jump_mean = o.jump_mean;
    s.jump_std = o.jump_std;
    s.seed = o.seed;
    s.dim = o.dim;
    s.horizon = o.horizon;
    s.psi = PsiSpec::parse(o.psi);
    if (app->count("--x0") > 0) s.x0 = o.x0;
    s.amplitude = o.amplitude;
    s.value = o.value;
    s.nonnegative = o.nonnegative;
    if (!o.mode.empty()) s.mode = interp_from_string(o.mode);
    s.validate();
    return s;
}

json run_simulate(const Options& o, CLI::App* app, const Artifacts& out) {
    const SimSpec settings = sim_spec_from(o, app);
    if (o.count < 1) throw ConfigError("--count must be >= 1");
    const auto paths = ensemble(settings, o.count);
    const SampleSpaceSpec space = settings.sample_space();
    std::string index = csv_row({"index", "file", "events", "terminal_x1", "sup_norm"});
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const std::string name = "path_" + std::to_string(i) + ".csv";
        write_path((out.dir / name).string(), paths[i], &space);
        index += csv_row({std::to_string(i), name, std::to_string(paths[i].size()),
                          fmt(paths[i].eval(paths[i].horizon(), 0)), fmt(sup_norm(paths[i]))});
    }
    out.csv("paths.csv", index);
    write_text((out.dir / "simulation.json").string(), to_json(settings).dump(2) + "\n");
    return json::array();
}

json run_qv(const Options& o, const Artifacts& out) {
    const Path p = load_input(o.input);
    const QVReport rep = qv_limit(p, o.n_max, o.tol);
    const std::size_t d = p.dim();

    std::string header = "t";
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) header += ",S" + std::to_string(i + 1) + std::to_string(j + 1);
    }
    std::string limit = header + "\n";
    for (std::size_t k = 0; k < rep.grid.size(); ++k) {
        limit += fmt(rep.grid[k]);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) limit += "," + fmt(rep.limit(k, i, j));
        }
        limit += "\n";
    }
    out.csv("qv_limit.csv", limit);

    std::string conv = csv_row({"n", "z_sup", "qv_T_norm", "partition_size"});
    for (std::size_t g = 0; g < rep.generations.size(); ++g) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double v = rep.at(g, rep.grid.size() - 1, i, j);
                norm2 += v * v;
            }
        }
        conv += csv_row({std::to_string(rep.generations[g]), fmt(rep.z_sup[g]), fmt(std::sqrt(norm2)),
                         std::to_string(rep.partition_times[g].size())});
    }
    out.csv("qv_convergence.csv", conv);

    std::string plot = csv_row({"n", "z_sup"});
    for (std::size_t g = 0; g < rep.generations.size(); ++g) {
        plot += csv_row({std::to_string(rep.generations[g]), fmt(rep.z_sup[g])});
    }
    out.csv("plot_z_sup.csv", plot);

    json per_gen = json::array();
    for (std::size_t g = 0; g < rep.generations.size(); ++g) {
        per_gen.push_back({{"n", rep.generations[g]}, {"z_sup", rep.z_sup[g]}});
    }
    out.json_file("qv_report.json", {{"dim", d},
                                     {"n_max", rep.n_max()},
                                     {"tol", rep.tol},
                                     {"cauchy_tol_met", rep.cauchy_tol_met},
                                     {"q0_convention", "Q^0 = 0, so Z^1 = Q^1"},
                                     {"generations", per_gen}});

    // last generation; levels only exist for 1-d paths
    const int n_last = rep.n_max();
    std::string part = csv_row({"k", "tau", "level"});
    if (d == 1) {
        const auto lp = lebesgue_partition_1d(p, n_last);
        for (std::size_t k = 0; k < lp.times.size(); ++k) {
            part += csv_row({std::to_string(k), fmt(lp.times[k]), fmt(lp.level(k))});
        }
    } else {
        const auto& times = rep.partition_times.back();
        for (std::size_t k = 0; k < times.size(); ++k) part += csv_row({std::to_string(k), fmt(times[k]), ""});
    }
    out.csv("partition.csv", part);

    // the jump identity holds for the limit; at a coarse n_max it only shows
    // how far the estimate still is from it
    const auto jumps = jump_identity_check(p, rep);
    json S_T = json::array();
    for (std::size_t i = 0; i < d; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < d; ++j) row.push_back(rep.limit_T(i, j));
        S_T.push_back(row);
    }
    std::cout << "[S]_T = " << S_T.dump() << "  cauchy_tol_met=" << rep.cauchy_tol_met << "\n";
    return json::array({{{"name", "jump_identity"},
                         {"pass", jumps.pass},
                         {"max_discrepancy", jumps.max_discrepancy},
                         {"informational", true}},
                        {{"name", "cauchy_tol"}, {"pass", rep.cauchy_tol_met}, {"informational", true}},
                        {{"name", "qv_T"}, {"value", S_T}, {"informational", true}}});
}

json run_crossings(const Options& o, const Artifacts& out) {
    const Path p = load_input(o.input);
    if (p.dim() != 1) throw ConfigError("crossings needs a 1-d path");
    const double t = o.t < 0.0 ? p.horizon() : o.t;
    json checks = json::array();
    if (o.h > 0.0) {
        const auto acc = crossings_accumulated(p, o.h, t);
        std::string rows = csv_row({"k", "a", "b", "up", "down"});
        for (const auto& iv : acc.per_interval) {
            rows += csv_row({std::to_string(iv.k), fmt(static_cast<double>(iv.k) * o.h),
                             fmt(static_cast<double>(iv.k + 1) * o.h), std::to_string(iv.up),
                             std::to_string(iv.down)});
        }
        out.csv("crossings_accumulated.csv", rows);
        json per = json::array();
        for (const auto& iv : acc.per_interval) per.push_back({{"k", iv.k}, {"up", iv.up}, {"down", iv.down}});
        out.json_file("crossings.json", {{"h", acc.h}, {"t", t}, {"U", acc.up}, {"D", acc.down},
                                         {"per_interval", per}});
        std::cout << "U=" << acc.up << " D=" << acc.down << "\n";
    } else {
        if (!(o.a < o.b)) throw ConfigError("need --a < --b");
        const auto c = crossings(p, o.a, o.b, t);
        out.csv("crossings.csv", csv_row({"a", "b", "t", "up", "down"}) +
                                     csv_row({fmt(o.a), fmt(o.b), fmt(t), std::to_string(c.up),
                                              std::to_string(c.down)}));
        out.json_file("crossings.json", {{"a", o.a}, {"b", o.b}, {"t", t}, {"U", c.up}, {"D", c.down}});
        std::cout << "up=" << c.up << " down=" << c.down << "\n";
    }
    return checks;
}

CagladRule rule_from(const std::string& text, std::size_t dim) {
    if (text == "left_limit") return left_limit_rule();
    if (text.rfind("constant:", 0) == 0) {
        return constant_rule(Vec(dim, parse_double(text.substr(9))));
    }
    throw ConfigError("unknown integrand: " + text + " (left_limit | constant:c)");
}

json run_integrate(const Options& o, const Artifacts& out) {
    const Path p = load_input(o.input);
    const CagladRule rule = rule_from(o.integrand, p.dim());
    const ItoReport ito = ito_integral(rule, p, o.n_max, o.tol);

    std::string curve = csv_row({"t", "integral"});
    for (std::size_t k = 0; k < ito.curve.times.size(); ++k) {
        curve += csv_row({fmt(ito.curve.times[k]), fmt(ito.curve.values[k])});
    }
    out.csv("integral.csv", curve);
    std::string conv = csv_row({"n", "terminal", "sup_diff_to_previous"});
    for (std::size_t g = 0; g < ito.generations.size(); ++g) {
        conv += csv_row({std::to_string(ito.generations[g]), fmt(ito.terminal[g]),
                         g == 0 ? "" : fmt(ito.sup_diff[g - 1])});
    }
    out.csv("integral_convergence.csv", conv);

    json checks = json::array();
    checks.push_back({{"name", "converged"}, {"pass", ito.converged}, {"informational", true},
                      {"note", ito.note}});
    if (p.dim() == 1 && o.integrand == "left_limit") {
        // 2 I_T + Q_T = S_T^2 - S_0^2 along the same partition
        const auto rep = qv_limit(p, o.n_max, o.tol);
        const double s0 = p.eval(0.0, 0), sT = p.eval(p.horizon(), 0);
        const double lhs = 2.0 * ito.terminal.back() + rep.limit_T(0, 0);
        const double rhs = sT * sT - s0 * s0;
        const double den = rep.limit_T(0, 0) + std::abs(rhs);
        const double rel = den > 0.0 ? std::abs(lhs - rhs) / den : 0.0;
        if (rel > 1e-9) {
            throw InternalConsistencyError("telescoping identity off by " + fmt(rel));
        }
        checks.push_back({{"name", "ito_identity"}, {"pass", true}, {"rel_error", rel}});
    }
    std::cout << "I_T = " << fmt(ito.terminal.back()) << "  converged=" << ito.converged << "\n";
    return checks;
}

json run_verify(const Options& o, const Artifacts& out) {
    std::vector<std::string> names = o.checks;
    if (names.empty() || (names.size() == 1 && names[0] == "all")) names = check_names();
    VerifyOptions vo;
    vo.count = o.count;
    vo.seed = o.seed;
    vo.psi = PsiSpec::parse(o.psi);
    json checks = json::array();
    std::string rows = csv_row({"check", "pass"});
    for (const auto& name : names) {
        const CheckResult r = run_check(name, vo);
        rows += csv_row({r.name, r.pass ? "1" : "0"});
        write_text((out.dir / ("check_" + r.name + ".json")).string(), r.details.dump(2) + "\n");
        checks.push_back({{"name", r.name}, {"pass", r.pass}, {"details", r.details}});
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " " << r.details.dump() << "\n";
    }
    out.csv("checks.csv", rows);
    return checks;
}

json run_continuity(const Options& o, const Artifacts& out) {
    ContinuityParams cp;
    cp.kind = o.continuity_kind == "cadlag" ? ContinuityCase::Cadlag : ContinuityCase::Continuous;
    if (o.continuity_kind != "cadlag" && o.continuity_kind != "continuous") {
        throw ConfigError("--case must be continuous or cadlag");
    }
    cp.epsilon = o.epsilon;
    cp.n = o.n;
    cp.metric.psi = PsiSpec::parse(o.psi);
    cp.metric.n_trunc = static_cast<int>(o.n_trunc);
    SimSpec settings;
    settings.seed = o.seed;
    settings.steps = o.steps;
    settings.psi = cp.metric.psi;
    if (cp.kind == ContinuityCase::Cadlag) {
        settings.kind = SimKind::JumpDiffusion;
        settings.volatility = 0.3;
        settings.jump_intensity = 5.0;
        settings.jump_std = 0.2;
    }
    const auto paths = ensemble(settings, o.count);
    const auto r = continuity_experiment(paths, cp);
    std::string rows = csv_row({"offset", "x", "y", "x_power"});
    std::string plot = csv_row({"x", "y"});
    for (const auto& row : r.rows) {
        rows += csv_row({fmt(row.offset), fmt(row.x), fmt(row.y), fmt(row.x_power)});
        plot += csv_row({fmt(row.x), fmt(row.y)});
    }
    out.csv("continuity.csv", rows);
    out.csv("plot_continuity.csv", plot);
    std::cout << "slope=" << fmt(r.slope) << " threshold=" << fmt(r.exponent - r.slack) << "\n";
    return json::array({{{"name", "continuity_slope"},
                         {"pass", r.pass},
                         {"slope", r.slope},
                         {"exponent", r.exponent},
                         {"slack", r.slack}}});
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json effective_config(CLI::App* sub) {
    json cfg = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_name(false, true);
        if (name.empty() || name == "--help" || name == "--config" || name == "-h,--help") continue;
        auto results = opt->results();
        if (results.empty()) {
            const std::string def = opt->get_default_str();
            if (def.empty()) continue;
            results = {def};
        }
        std::string key = opt->get_lnames().empty() ? name : opt->get_lnames().front();
        if (opt->get_multi_option_policy() != CLI::MultiOptionPolicy::TakeAll) {
            cfg[key] = results.back();
        } else if (results.size() == 1) {
            cfg[key] = results[0];
        } else {
            cfg[key] = results;
        }
    }
    return cfg;
}

// The output directory does not change what is computed.
std::string config_hash(json config) {
    config.erase("output-dir");
    return hex64(fnv1a(config.dump()));
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--output-dir", o.output_dir, "Directory for artifacts")->capture_default_str();
    sub->add_option("--config", o.config, "JSON file with option values");
    sub->add_option("--seed", o.seed, "Seed for the counter-based generator")->capture_default_str();
    sub->add_option("--psi", o.psi, "Jump bound psi as family:params")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    // --config file.json expands into tokens placed before the user's own
    // arguments, so explicit flags win (options take the last value).
    json cfg_file;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            try {
                cfg_file = json::parse(read_text(args[i + 1]));
            } catch (const IoError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kIo;
            } catch (const json::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kConfig;
            }
        }
    }
    std::vector<std::string> tokens;
    try {
        std::string command;
        if (!args.empty() && std::find(kCommands.begin(), kCommands.end(), args[0]) != kCommands.end()) {
            command = args[0];
            args.erase(args.begin());
        } else if (cfg_file.is_object() && cfg_file.contains("command")) {
            command = cfg_file["command"].get<std::string>();
        }
        if (!command.empty()) tokens.push_back(command);
        if (!cfg_file.is_null()) {
            const auto extra = config_tokens(cfg_file);
            tokens.insert(tokens.end(), extra.begin(), extra.end());
        }
        tokens.insert(tokens.end(), args.begin(), args.end());
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    }

    CLI::App app{"pathcalc: pathwise stochastic calculus on finite-event paths"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;

    auto* sim = app.add_subcommand("simulate", "Simulate paths and write CSV + JSON sidecars");
    add_common(sim, o);
    sim->add_option("--kind", o.kind, "brownian | geometric-brownian | jump-diffusion | oscillator | constant")
        ->capture_default_str();
    sim->add_option("--steps", o.steps)->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--drift", o.drift)->capture_default_str();
    sim->add_option("--volatility", o.volatility)->capture_default_str();
    sim->add_option("--jump-intensity", o.jump_intensity)->capture_default_str();
    sim->add_option("--jump-mean", o.jump_mean)->capture_default_str();
    sim->add_option("--jump-std", o.jump_std)->capture_default_str();
    sim->add_option("--dim", o.dim)->capture_default_str()->check(CLI::Range(1, 64));
    sim->add_option("--horizon", o.horizon)->capture_default_str();
    sim->add_option("--x0", o.x0);
    sim->add_option("--amplitude", o.amplitude)->capture_default_str();
    sim->add_option("--value", o.value)->capture_default_str();
    sim->add_flag("--nonnegative", o.nonnegative);
    sim->add_option("--mode", o.mode, "step | linear (overrides the kind's default)");
    sim->add_option("--count", o.count, "Number of paths")->capture_default_str()->check(CLI::PositiveNumber);

    auto* qv = app.add_subcommand("qv", "Quadratic variation along Lebesgue partitions");
    add_common(qv, o);
    qv->add_option("--input", o.input, "Path CSV");
    qv->add_option("--n-max", o.n_max)->capture_default_str()->check(CLI::Range(1, 52));
    qv->add_option("--tol", o.tol)->capture_default_str()->check(CLI::PositiveNumber);

    auto* cr = app.add_subcommand("crossings", "Up/downcrossing counts");
    add_common(cr, o);
    cr->add_option("--input", o.input, "Path CSV");
    cr->add_option("--a", o.a)->capture_default_str();
    cr->add_option("--b", o.b)->capture_default_str();
    cr->add_option("--width", o.h, "Grid width for accumulated counts (0 = single interval)")
        ->capture_default_str();
    cr->add_option("--t", o.t, "Count on [0, t] (default T)");

    auto* in = app.add_subcommand("integrate", "Model-free Ito integral of a caglad rule");
    add_common(in, o);
    in->add_option("--input", o.input, "Path CSV");
    in->add_option("--n-max", o.n_max)->capture_default_str()->check(CLI::Range(1, 52));
    in->add_option("--tol", o.tol)->capture_default_str()->check(CLI::PositiveNumber);
    in->add_option("--integrand", o.integrand, "left_limit | constant:c")->capture_default_str();

    auto* ve = app.add_subcommand("verify", "Run named pathwise and statistical checks");
    add_common(ve, o);
    ve->add_option("--check", o.checks, "Check name (repeatable) or all")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ve->add_option("--count", o.count, "Sample size (0 = per-check default)")
        ->check(CLI::NonNegativeNumber);
    ve->add_option("--K", o.K)->capture_default_str();
    ve->add_option("--lambda", o.lambda)->capture_default_str();

    auto* co = app.add_subcommand("continuity", "Continuity-exponent experiment");
    add_common(co, o);
    co->add_option("--case", o.continuity_kind, "continuous | cadlag")->capture_default_str();
    co->add_option("--count", o.count)->capture_default_str()->check(CLI::PositiveNumber);
    co->add_option("--steps", o.steps)->capture_default_str()->check(CLI::PositiveNumber);
    co->add_option("--epsilon", o.epsilon)->capture_default_str();
    co->add_option("--n", o.n, "Partition generation")->capture_default_str()->check(CLI::Range(1, 52));
    co->add_option("--N-max", o.n_trunc, "Truncation of the localized sums")->capture_default_str();

    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    if (command == "verify" && !ve->count("--count")) o.count = 0;

    json config = effective_config(sub);
    json manifest = {{"tool", "pathcalc"},
                     {"version", kVersion},
                     {"command", command},
                     {"config", config},
                     {"config_hash", config_hash(config)},
                     {"rng", kRngAlgorithm}};
    int code = kOk;
    json checks = json::array();
    Artifacts out{fs::path(o.output_dir)};
    try {
        std::error_code ec;
        fs::create_directories(out.dir, ec);
        if (ec) throw IoError("cannot create " + o.output_dir + ": " + ec.message());
        if (command == "simulate") checks = run_simulate(o, sim, out);
        else if (command == "qv") checks = run_qv(o, out);
        else if (command == "crossings") checks = run_crossings(o, out);
        else if (command == "integrate") checks = run_integrate(o, out);
        else if (command == "verify") checks = run_verify(o, out);
        else checks = run_continuity(o, out);
        for (const auto& c : checks) {
            if (c.contains("pass") && !c.value("informational", false) && !c["pass"].get<bool>()) {
                code = kCheckFailed;
            }
        }
    } catch (const InternalConsistencyError& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        code = kInternal;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        code = kIo;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        code = kConfig;
    } catch (const ContractError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        code = kConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        code = kConfig;
    }
    manifest["checks"] = checks;
    manifest["exit_code"] = code;
    manifest["timestamp"] = timestamp();
    try {
        write_text((out.dir / "manifest.json").string(), manifest.dump(2) + "\n");
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        if (code == kOk) code = kIo;
    }
    return code;
}
