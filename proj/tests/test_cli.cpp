#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "pathcalc/path_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("pathcalc_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(PATHCALC_CLI) + " " + args + " > " +
                                (dir_ / "stdout.txt").string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string p(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const fs::path& f) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    json manifest(const std::string& sub) const {
        return json::parse(slurp(dir_ / sub / "manifest.json"));
    }

    fs::path dir_;
};

double qv_T_from(const json& m) {
    for (const auto& c : m["checks"]) {
        if (c["name"] == "qv_T") return c["value"][0][0].get<double>();
    }
    return -1.0;
}

}  // namespace

TEST_F(CliTest, QvOnP1) {
    pathcalc::write_path(p("p1.csv"), fixtures::p1());
    ASSERT_EQ(run("qv --input " + p("p1.csv") + " --n-max 20 --output-dir " + p("out")), 0);
    const auto m = manifest("out");
    EXPECT_NEAR(qv_T_from(m), 1.21, 1e-12);
    EXPECT_EQ(m["tool"], "pathcalc");
    EXPECT_EQ(m["command"], "qv");
    EXPECT_EQ(m["exit_code"], 0);
    EXPECT_TRUE(m.contains("config_hash"));
    EXPECT_TRUE(fs::exists(dir_ / "out" / "qv_limit.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "out" / "plot_z_sup.csv"));
}

TEST_F(CliTest, PartitionExport) {
    pathcalc::write_path(p("p1.csv"), fixtures::p1());
    ASSERT_EQ(run("qv --input " + p("p1.csv") + " --n-max 1 --output-dir " + p("out")), 0);
    EXPECT_EQ(slurp(dir_ / "out" / "partition.csv"), "k,tau,level\n0,0,0\n1,1,0.5\n2,3,1\n");
    const auto rep = json::parse(slurp(dir_ / "out" / "qv_report.json"));
    EXPECT_DOUBLE_EQ(rep["generations"][0]["z_sup"].get<double>(), 0.85);
    ASSERT_EQ(run("crossings --input " + p("p1.csv") + " --a 0.5 --b 1 --output-dir " + p("cr")), 0);
    const auto cr = json::parse(slurp(dir_ / "cr" / "crossings.json"));
    EXPECT_EQ(cr["U"], 1);
    EXPECT_EQ(cr["D"], 0);
}

TEST_F(CliTest, ConstantSimulationHasZeroQV) {
    ASSERT_EQ(run("simulate --kind constant --value 0.7 --steps 10 --output-dir " + p("sim")), 0);
    ASSERT_TRUE(fs::exists(dir_ / "sim" / "path_0.csv"));
    ASSERT_EQ(run("qv --input " + p("sim/path_0.csv") + " --n-max 8 --output-dir " + p("qv")), 0);
    EXPECT_EQ(qv_T_from(manifest("qv")), 0.0);
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run("qv --input " + p("missing.csv") + " --output-dir " + p("a")), 3);
    EXPECT_EQ(run("qv --n-max -3 --input x --output-dir " + p("b")), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("simulate --kind nonsense --output-dir " + p("c")), 2);
    {
        std::ofstream bad(p("bad.csv"));
        bad << "t,x\n0,abc\n";
    }
    EXPECT_EQ(run("qv --input " + p("bad.csv") + " --output-dir " + p("d")), 3);
}

TEST_F(CliTest, VerifyBdgExitsZero) {
    ASSERT_EQ(run("verify --check bdg --count 2000 --seed 7 --output-dir " + p("v")), 0);
    const auto m = manifest("v");
    ASSERT_EQ(m["checks"].size(), 1u);
    EXPECT_TRUE(m["checks"][0]["pass"].get<bool>());
    EXPECT_TRUE(fs::exists(dir_ / "v" / "check_bdg.json"));
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
    {
        std::ofstream cfg(p("cfg.json"));
        cfg << R"({"command": "simulate", "kind": "oscillator", "steps": 4, "horizon": 4,
                   "output_dir": ")" << p("from_cfg") << R"("})";
    }
    ASSERT_EQ(run("--config " + p("cfg.json")), 0);
    const auto a = pathcalc::read_path(p("from_cfg/path_0.csv"));
    EXPECT_EQ(a.path, fixtures::p2());

    // an explicit flag beats the file
    ASSERT_EQ(run("simulate --config " + p("cfg.json") + " --steps 2 --horizon 2"), 0);
    const auto b = pathcalc::read_path(p("from_cfg/path_0.csv"));
    EXPECT_EQ(b.path.size(), 3u);
    EXPECT_EQ(manifest("from_cfg")["config"]["steps"], "2");
}

TEST_F(CliTest, ByteIdenticalReruns) {
    const std::string sim = "simulate --kind jump-diffusion --steps 300 --jump-intensity 4 --count 3 "
                            "--seed 99 --output-dir ";
    ASSERT_EQ(run(sim + p("r1")), 0);
    ASSERT_EQ(run(sim + p("r2")), 0);
    const std::string qv = "qv --n-max 12 --input ";
    ASSERT_EQ(run(qv + p("r1/path_1.csv") + " --output-dir " + p("q1")), 0);
    ASSERT_EQ(run(qv + p("r1/path_1.csv") + " --output-dir " + p("q2")), 0);
    int compared = 0;
    for (const auto& [a, b] : {std::pair{"r1", "r2"}, std::pair{"q1", "q2"}}) {
        for (const auto& e : fs::directory_iterator(dir_ / a)) {
            if (e.path().extension() != ".csv") continue;
            EXPECT_EQ(slurp(e.path()), slurp(dir_ / b / e.path().filename())) << e.path();
            ++compared;
        }
    }
    EXPECT_GT(compared, 5);
    EXPECT_EQ(manifest("r1")["config_hash"], manifest("r2")["config_hash"]);
}
