// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pathcalc/bdg.hpp"
#include "pathcalc/crossings.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/experiments.hpp"
#include "pathcalc/integration.hpp"
#include "pathcalc/quadratic_variation.hpp"
#include "pathcalc/rng.hpp"
#include "pathcalc/simulate.hpp"
#include "pathcalc/verify.hpp"

namespace fs = std::filesystem;
using namespace pathcalc;

namespace {

constexpr std::uint64_t kSeed = 11;

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Test-side oracle for x* <= 6 sqrt([x]) + 2 (h.x), in long double.
bool bdg_oracle_holds(const std::vector<double>& x) {
    long double qv = 0, star = 0, hx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const long double xk = x[k];
        const long double inc = k == 0 ? xk : xk - x[k - 1];
        qv += inc * inc;
        star = std::max(star, std::fabs(xk));
        if (k + 1 < x.size()) {
            const long double d = std::sqrt(qv + star * star);
            if (d != 0) hx += xk / d * (x[k + 1] - xk);
        }
    }
    const long double rhs = 6 * std::sqrt(qv) + 2 * hx;
    return star <= rhs + 1e-15L * (star + 6 * std::sqrt(qv));
}

Outcome bdg() {
    const auto t0 = std::chrono::steady_clock::now();
    int lib_bad = 0, oracle_bad = 0, zero_start = 0;
    constexpr int kCount = 100000;
    for (int i = 0; i < kCount; ++i) {
        PhiloxStream rng(kSeed, i);
        const auto x = random_bdg_sequence(rng, 200);
        lib_bad += bdg_check(x).holds ? 0 : 1;
        oracle_bad += bdg_oracle_holds(x) ? 0 : 1;
        zero_start += x[0] == 0.0;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << kCount << " sequences, violations " << lib_bad << " (oracle " << oracle_bad
       << "), zero-start " << zero_start << ", " << secs << " s";
    return {lib_bad == 0 && oracle_bad == 0 && zero_start > 0 && secs < 10.0, os.str()};
}

Outcome library_check(const std::string& name, double max_secs = 0.0) {
    VerifyOptions o;
    o.seed = kSeed;
    const auto t0 = std::chrono::steady_clock::now();
    const CheckResult r = run_check(name, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = r.pass;
    std::string detail = r.details.dump();
    if (max_secs > 0.0) {
        pass = pass && secs < max_secs;
        detail += " runtime " + std::to_string(secs) + " s";
    }
    return {pass, detail};
}

Path random_2d(PhiloxStream& rng) {
    const Path a = random_step_path(rng, 30, 1.0);
    std::vector<double> v;
    for (std::size_t k = 0; k < a.size(); ++k) {
        v.push_back(a.value(k, 0));
        v.push_back(rng.uniform() - 0.5);
    }
    return Path(2, 1.0, std::vector<double>(a.times().begin(), a.times().end()), std::move(v),
                Interp::Step);
}

Outcome pure_jump() {
    double worst = 0.0;
    int jump_fail = 0;
    for (int i = 0; i < 1000; ++i) {
        PhiloxStream rng(kSeed, 50000 + i);
        const Path p = i % 2 ? random_2d(rng) : random_step_path(rng, 30, 1.0);
        const auto rep = qv_limit(p, 48, 1e-12);
        const std::size_t d = p.dim();
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                double sum = 0.0, scale = 0.0;
                for (std::size_t k = 1; k < p.size(); ++k) {
                    const double x = (p.value(k, a) - p.value(k - 1, a)) * (p.value(k, b) - p.value(k - 1, b));
                    sum += x;
                    scale += std::fabs(x);
                }
                worst = std::max(worst, std::fabs(rep.limit_T(a, b) - sum) / std::max(1.0, scale));
            }
        }
        // polarization: [S1, S2] = ([S1 + S2] - [S1] - [S2]) / 2
        if (d == 2) {
            const double s12 = qv_limit(p.coordinate_sum(0, 1), 48, 1e-12).limit_T(0, 0);
            const double pol = 0.5 * (s12 - rep.limit_T(0, 0) - rep.limit_T(1, 1));
            worst = std::max(worst, std::fabs(pol - rep.limit_T(0, 1)) / std::max(1.0, s12));
        }
        // jump identity: the limit moves by (dS)(dS)^T at each event
        for (std::size_t k = 1; k < p.size(); ++k) {
            const std::size_t g = rep.grid_index(p.time(k));
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) {
                    const double jump = rep.limit(g, a, b) - rep.limit(g - 1, a, b);
                    const double expect = (p.value(k, a) - p.value(k - 1, a)) * (p.value(k, b) - p.value(k - 1, b));
                    if (std::fabs(jump - expect) > 1e-12 * std::max(1.0, std::fabs(expect))) ++jump_fail;
                }
            }
        }
    }
    std::ostringstream os;
    os << "1000 paths, max rel error " << worst << ", jump identity failures " << jump_fail;
    return {worst <= 1e-12 && jump_fail == 0, os.str()};
}

Outcome ito() {
    double step_worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        PhiloxStream rng(kSeed, 60000 + i);
        const Path p = random_step_path(rng, 30, 1.0);
        const auto r = ito_integral(left_limit_rule(), p, 48, 1e-12, 47);
        const double S = qv_limit(p, 48, 1e-12).limit_T(0, 0);
        const double s0 = p.eval(0.0, 0), sT = p.eval(1.0, 0);
        const double e = std::fabs(2.0 * r.terminal.back() + S - (sT * sT - s0 * s0));
        step_worst = std::max(step_worst, e / std::max(1.0, S + std::fabs(sT * sT - s0 * s0)));
    }
    double bm_worst = 0.0;
    SimSpec s;
    s.steps = 4096;
    s.seed = kSeed;
    for (std::size_t i = 0; i < 8; ++i) {
        const Path p = simulate(s, i);
        const auto r = ito_integral(left_limit_rule(), p, 10, 1e-2, 10);
        const double S = qv_limit(p, 10, 1e-12).limit_T(0, 0);
        const double s0 = p.eval(0.0, 0), sT = p.eval(1.0, 0);
        const double e = std::fabs(2.0 * r.terminal.back() + S - (sT * sT - s0 * s0));
        bm_worst = std::max(bm_worst, e / (S + std::fabs(sT * sT - s0 * s0)));
    }
    std::ostringstream os;
    os << "step paths max error " << step_worst << ", brownian max rel error " << bm_worst;
    return {step_worst <= 1e-12 && bm_worst <= 1e-2, os.str()};
}

// Exhaustive count over all index subsets, alternating low/high roles.
CrossingCount brute_force(const std::vector<double>& f, double a, double b) {
    CrossingCount best;
    const std::size_t m = f.size();
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::vector<double> pick;
        for (std::size_t k = 0; k < m; ++k) {
            if (mask >> k & 1u) pick.push_back(f[k]);
        }
        if (pick.size() % 2) continue;
        bool up = true, down = true;
        for (std::size_t k = 0; k < pick.size(); k += 2) {
            up = up && pick[k] <= a && pick[k + 1] >= b;
            down = down && pick[k] >= b && pick[k + 1] <= a;
        }
        const auto n = static_cast<std::int64_t>(pick.size() / 2);
        if (up) best.up = std::max(best.up, n);
        if (down) best.down = std::max(best.down, n);
    }
    return best;
}

Outcome crossing_oracle() {
    int mismatches = 0, nonzero = 0;
    for (int i = 0; i < 10000; ++i) {
        PhiloxStream rng(kSeed, 70000 + i);
        const std::size_t events = 1 + rng.next_u32() % 8;
        std::vector<double> t, v;
        for (std::size_t k = 0; k < events; ++k) {
            t.push_back(static_cast<double>(k));
            // a coarse grid of values so that ties with a and b occur
            v.push_back(0.25 * static_cast<double>(static_cast<int>(rng.next_u32() % 9) - 4));
        }
        const double horizon = static_cast<double>(events);
        const Path p = Path::scalar(horizon, t, v);
        double a = 0.25 * static_cast<double>(static_cast<int>(rng.next_u32() % 7) - 3);
        double b = a + 0.25 * static_cast<double>(1 + rng.next_u32() % 4);
        const double upto = std::floor(rng.uniform() * (horizon + 1.0));
        std::vector<double> seen;
        for (std::size_t k = 0; k < events && t[k] <= upto; ++k) seen.push_back(v[k]);
        const auto got = crossings(p, a, b, std::min(upto, horizon));
        const auto want = brute_force(seen, a, b);
        mismatches += got == want ? 0 : 1;
        nonzero += want.up + want.down > 0;
    }
    std::ostringstream os;
    os << "10000 instances (" << nonzero << " with crossings), mismatches " << mismatches;
    return {mismatches == 0, os.str()};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PATHCALC_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome reproducibility() {
    const fs::path root = fs::temp_directory_path() / "pathcalc_acceptance_repro";
    fs::remove_all(root);
    const std::vector<std::string> commands{
        "simulate --kind jump-diffusion --steps 500 --jump-intensity 5 --count 4 --seed 3",
        "qv --input " + (root / "run1_0" / "path_2.csv").string() + " --n-max 14",
        "crossings --input " + (root / "run1_0" / "path_2.csv").string() + " --width 0.125",
        "integrate --input " + (root / "run1_0" / "path_2.csv").string() + " --n-max 10",
        "verify --check crossings --check bdg --count 500 --seed 5",
        "continuity --case continuous --count 20 --steps 256 --seed 9"};
    int compared = 0, differ = 0, failed_runs = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::vector<fs::path> dirs;
        for (int run = 1; run <= 2; ++run) {
            dirs.push_back(root / ("run" + std::to_string(run) + "_" + std::to_string(c)));
            if (run_cli(commands[c] + " --output-dir " + dirs.back().string()) != 0) ++failed_runs;
        }
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            if (e.path().extension() != ".csv") continue;
            ++compared;
            if (slurp(e.path()) != slurp(dirs[1] / e.path().filename())) ++differ;
        }
    }
    fs::remove_all(root);
    std::ostringstream os;
    os << commands.size() << " commands run twice, " << compared << " CSV files compared, "
       << differ << " differ, " << failed_runs << " nonzero exits";
    return {differ == 0 && failed_runs == 0 && compared >= 10, os.str()};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "pathwise BDG inequality on 1e5 sequences", bdg},
        {2, "K-process identity via L strategy", [] { return library_check("k_identity"); }},
        {3, "Doob aggregate upcrossing bound and admissibility", [] { return library_check("doob"); }},
        {4, "Hoeffding exponential supermartingale", [] { return library_check("hoeffding"); }},
        {5, "QV convergence on Brownian paths", [] { return library_check("qv_brownian", 120.0); }},
        {6, "pure-jump QV oracle and jump identity", pure_jump},
        {7, "Ito telescoping identity", ito},
        {8, "concentration bound, continuous ensemble", [] { return library_check("concentration"); }},
        {9, "cadlag BDG frequency bound and pathwise inequality", [] { return library_check("cadlag_bdg"); }},
        {10, "continuity exponents", [] { return library_check("continuity"); }},
        {11, "greedy crossing counter vs exhaustive enumeration", crossing_oracle},
        {12, "byte-identical CLI reruns", reproducibility},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const InternalConsistencyError& e) {
            o = {false, std::string("internal consistency error: ") + e.what()};
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %2d: %s [%.1f s] %s\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.title.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
