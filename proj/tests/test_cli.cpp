#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wingreg/flap_io.hpp"
#include "wingreg/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kCli = WINGREG_CLI_PATH;
const std::string kExamples = std::string(WINGREG_SOURCE_DIR) + "/examples";

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / ("wingreg_cli_io_" + std::to_string(counter++));
    fs::create_directories(dir);
    fs::path out = dir / "stdout.txt";
    fs::path err = dir / "stderr.txt";
    std::string cmd = std::string(kCli) + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, slurp(out), slurp(err)};
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("wingreg_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
    RunResult r = run_cli("");
    EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, UnknownFlagIsUsageError) {
    RunResult r = run_cli("force-budget --no-such-flag 1");
    EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, VersionExitsZero) {
    RunResult r = run_cli("--version");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}

TEST(Cli, ForceBudgetEmitsDesignNumbers) {
    fs::path out = fresh_dir("budget");
    RunResult r = run_cli(
        "force-budget --mass-kg 0.035 --g 9.81 --thrust-margin 1.33 --fos 2 "
        "--arm-out-mm 78.89 --arm-in-mm 15.6 --displacement-mm 1.5 --out " +
        out.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json doc = json::parse(slurp(out / "requirement.json"));
    EXPECT_NEAR(doc["single_wing_lift_N"].get<double>(), 0.4566, 0.0005);
    EXPECT_NEAR(doc["regulator_load_N"].get<double>(), 2.309, 0.002);
    EXPECT_NEAR(doc["regulator_load_gf"].get<double>(), 235.45, 0.3);
    EXPECT_EQ(doc["requirement"]["displacement_mm"].get<double>(), 1.5);
    // manifest rides along
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

TEST(Cli, DomainErrorsExitOneWithStableIdentifier) {
    fs::path out = fresh_dir("badsolve");
    RunResult r =
        run_cli("solve --def /nonexistent.json --angle-deg 10 --out " + out.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("IoError"), std::string::npos) << r.err;

    // domain failure from the solver: an unassemblable sweep length
    fs::path out2 = fresh_dir("badsweep");
    RunResult r2 = run_cli("sweep-length --def " + kExamples + "/aerobat_delta.json" +
                           " --bar R1 --lengths 300 --out " + out2.string());
    EXPECT_EQ(r2.exit_code, 1);
    EXPECT_NE(r2.err.find("NonConvergence"), std::string::npos) << r2.err;
}

TEST(Cli, RefusesToOverwriteWithoutForce) {
    fs::path out = fresh_dir("overwrite");
    std::string cmd = "force-budget --out " + out.string();
    EXPECT_EQ(run_cli(cmd).exit_code, 0);
    RunResult denied = run_cli(cmd);
    EXPECT_EQ(denied.exit_code, 1);
    EXPECT_NE(denied.err.find("--force"), std::string::npos);
    EXPECT_EQ(run_cli(cmd + " --force").exit_code, 0);
}

TEST(Cli, SweepLengthRangeSyntaxProducesNineFiles) {
    fs::path out = fresh_dir("sweep9");
    RunResult r = run_cli("sweep-length --def " + kExamples + "/aerobat_delta.json" +
                          " --bar R1 --lengths 28.58:30.08:9 --out " + out.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    int gait_files = 0;
    for (const auto& entry : fs::directory_iterator(out))
        if (entry.path().filename().string().rfind("gait_L", 0) == 0) ++gait_files;
    EXPECT_EQ(gait_files, 9);
    EXPECT_TRUE(fs::exists(out / "metrics.csv"));
}

TEST(Cli, SweepOutputsAreByteIdenticalAcrossRunsAndThreads) {
    fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b"), c = fresh_dir("det_c");
    const std::string base = "sweep-length --def " + kExamples + "/aerobat_delta.json" +
                             " --bar R1 --lengths 28.58,29.33,30.08";
    ASSERT_EQ(run_cli(base + " --threads 1 --out " + a.string()).exit_code, 0);
    ASSERT_EQ(run_cli(base + " --threads 1 --out " + b.string()).exit_code, 0);
    ASSERT_EQ(run_cli(base + " --threads 4 --out " + c.string()).exit_code, 0);
    for (const char* name : {"gait_L28.58.csv", "gait_L29.33.csv", "gait_L30.08.csv",
                             "metrics.csv"}) {
        const std::string ref = slurp(a / name);
        ASSERT_FALSE(ref.empty());
        EXPECT_EQ(ref, slurp(b / name)) << name;
        EXPECT_EQ(ref, slurp(c / name)) << name;
    }
}

TEST(Cli, MechDirectDriveFeasibilityVerdicts) {
    fs::path out = fresh_dir("mechdirect");
    RunResult r = run_cli("mech --type direct --stroke 6 --actuator " + kExamples +
                          "/tula50.json --req-displacement-mm 1.5 --req-force-gf 235.45 --out " +
                          out.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json rep = json::parse(slurp(out / "feasibility.json"));
    EXPECT_TRUE(rep["displacement_pass"].get<bool>());
    EXPECT_FALSE(rep["force_pass"].get<bool>());
    EXPECT_FALSE(rep["pass"].get<bool>());
}

TEST(Cli, OptimizeInfeasibleExitsOne) {
    fs::path out = fresh_dir("optinf");
    RunResult r = run_cli("optimize --actuator " + kExamples +
                          "/tula50.json --req-displacement-mm 1.5 --req-force-gf 235.45 "
                          "--grid 12 --out " +
                          out.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("Infeasible"), std::string::npos) << r.err;
}

TEST(Cli, ActuateWithLoadProfileStallsWithStableError) {
    fs::path out = fresh_dir("actstall");
    fs::path profile = out / "ramp.csv";
    {
        std::ofstream f(profile, std::ios::binary);
        f << "position_um,load_gf\n0,0\n1000,25\n";  // crosses 20 gf at 800 um
    }
    RunResult r = run_cli("actuate --spec " + kExamples + "/tula50.json --target-um 1500 " +
                          "--load-profile " + profile.string() + " --out " + out.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("TargetUnreachable"), std::string::npos) << r.err;
}

TEST(Cli, ActuateTraceRoundTrip) {
    fs::path out = fresh_dir("acttrace");
    RunResult r = run_cli("actuate --spec " + kExamples +
                          "/tula50.json --target-um 250 --load-gf 5 --out " + out.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json res = json::parse(slurp(out / "result.json"));
    EXPECT_TRUE(res["arrived"].get<bool>());
    EXPECT_NEAR(res["end_position_um"].get<double>(), 250.0, 0.1);
    EXPECT_TRUE(fs::exists(out / "trace.csv"));
}

TEST(Cli, AnalyzeEndToEndIsDeterministic) {
    using namespace wingreg;
    fs::path data = fresh_dir("analyze_data");

    json manifest = json::array();
    int idx = 0;
    for (double length : {28.58, 30.08}) {
        SyntheticTrialSpec spec;
        spec.frequency_hz = 5.0;
        spec.duration_s = 2.0;
        spec.lift_peak_N = length > 29.0 ? 1.37 : 1.0;
        spec.peak_fraction = length > 29.0 ? 0.40 : 0.23;
        spec.seed = 400 + static_cast<unsigned>(idx);
        SyntheticTrial trial = generate_trial(spec);
        const std::string f = "force_" + std::to_string(idx) + ".csv";
        const std::string g = "angle_" + std::to_string(idx) + ".csv";
        write_force_csv((data / f).string(), trial.force);
        write_angle_csv((data / g).string(), trial.angle);
        manifest.push_back({{"r1_length_mm", length},
                            {"frequency_hz", 5.0},
                            {"trial", 1},
                            {"force_csv", f},
                            {"angle_csv", g}});
        ++idx;
    }
    {
        std::ofstream f(data / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << '\n';
    }

    fs::path out1 = fresh_dir("analyze_1"), out2 = fresh_dir("analyze_2");
    const std::string base = "analyze --manifest " + (data / "manifest.json").string();
    ASSERT_EQ(run_cli(base + " --threads 1 --out " + out1.string()).exit_code, 0);
    ASSERT_EQ(run_cli(base + " --threads 2 --out " + out2.string()).exit_code, 0);

    EXPECT_EQ(slurp(out1 / "summary.json"), slurp(out2 / "summary.json"));
    EXPECT_EQ(slurp(out1 / "cycles.csv"), slurp(out2 / "cycles.csv"));

    json summary = json::parse(slurp(out1 / "summary.json"));
    ASSERT_EQ(summary["conditions"].size(), 2u);
    bool checked = false;
    for (const auto& cmp : summary["comparisons"]) {
        if (cmp["r1_length_mm"].get<double>() == 30.08) {
            EXPECT_NEAR(cmp["peak_force_ratio"].get<double>(), 1.37, 0.05);
            checked = true;
        }
    }
    EXPECT_TRUE(checked);
}
