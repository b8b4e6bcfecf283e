#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgbf/harness.hpp"

#ifndef QGBF_CLI_PATH
#define QGBF_CLI_PATH ""
#endif

using namespace qgbf;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("qgbf_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

bool have_cli() { return *QGBF_CLI_PATH != '\0'; }

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + QGBF_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(BuiltinCases, Definitions) {
    for (int id = 1; id <= 4; ++id) {
        const auto c = builtin_case(id);
        ASSERT_EQ(c.state_axes.size(), 1u);
        EXPECT_EQ(c.state_axes[0].num_qubits, 4);
        EXPECT_TRUE(c.noise_axes()[0].is_signed);
    }
    EXPECT_EQ(builtin_case(1).qrw_repeats, 1);
    EXPECT_EQ(builtin_case(4).qrw_repeats, 4);
    EXPECT_THROW(builtin_case(5), std::invalid_argument);
    EXPECT_EQ(parse_method("qrw"), Method::Qrw);
    EXPECT_THROW(parse_method("fft"), std::invalid_argument);
}

TEST(ExecuteCase, AllMethodsPassTheirOracles) {
    RunOptions o;
    o.shots = 0;
    for (int id = 1; id <= 4; ++id)
        for (Method m : {Method::Qft, Method::Qrw, Method::Classical}) {
            const auto run = execute_case(builtin_case(id), m, o);
            EXPECT_TRUE(run.oracle_ok()) << run.label() << " TV " << run.oracle_tv;
        }
}

TEST(ExecuteCase, QrwMatchesTargetWhenNoiseIsTheWalkKernel) {
    RunOptions o;
    o.shots = 0;
    EXPECT_LE(execute_case(builtin_case(4), Method::Qrw, o).target_tv, 1e-10);
    EXPECT_GT(execute_case(builtin_case(1), Method::Qrw, o).target_tv, 1e-3);
}

TEST(ExecuteCase, RepeatsOverride) {
    RunOptions o;
    o.shots = 0;
    o.repeats = 2;
    const auto run = execute_case(builtin_case(4), Method::Qrw, o);
    EXPECT_EQ(run.repeats, 2);
    EXPECT_NEAR(run.result.exact_marginal[7], 0.5, 1e-12);
}

TEST(CaseOutputs, FilesAndColumnSums) {
    const auto dir = scratch_dir("outputs");
    RunOptions o;
    o.shots = 20000;
    o.seed = 3;
    o.dense = true;
    const auto run = execute_case(builtin_case(1), Method::Qft, o);
    const auto files = write_case_outputs(run, o, dir);
    for (const char* suffix : {"_density.csv", "_histogram.csv", "_result.json", "_resources.json", "_plot.gp",
                               "_manifest.json"})
        EXPECT_TRUE(fs::exists(dir / ("case1_qft" + std::string(suffix)))) << suffix;
    EXPECT_EQ(files.size(), 6u);

    const auto rows = read_csv(dir / "case1_qft_density.csv");
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"flat_index", "coord_dim0", "exact", "sampled", "oracle", "target"}));
    for (std::size_t col = 2; col < rows[0].size(); ++col) {
        double s = 0.0;
        for (std::size_t r = 1; r < rows.size(); ++r) s += std::stod(rows[r][col]);
        EXPECT_NEAR(s, 1.0, 1e-9) << rows[0][col];
    }

    const auto manifest = json::parse(slurp(dir / "case1_qft_manifest.json"));
    EXPECT_EQ(manifest["seed"], 3);
    EXPECT_EQ(manifest["shots"], 20000);
    EXPECT_TRUE(manifest["oracle_ok"].get<bool>());
    const auto resources = json::parse(slurp(dir / "case1_qft_resources.json"));
    EXPECT_TRUE(resources.contains("oneq"));
    fs::remove_all(dir);
}

TEST(CaseOutputs, ByteIdenticalReruns) {
    const auto a = scratch_dir("rerun_a"), b = scratch_dir("rerun_b");
    RunOptions o;
    o.shots = 5000;
    o.seed = 11;
    for (const auto& dir : {a, b})
        for (Method m : {Method::Qft, Method::Qrw}) write_case_outputs(execute_case(builtin_case(2), m, o), o, dir);
    for (const auto& entry : fs::directory_iterator(a))
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(CaseOutputs, Case4Weights) {
    RunOptions o;
    o.shots = 0;
    const auto run = execute_case(builtin_case(4), Method::Qft, o);
    const std::vector<std::pair<std::size_t, double>> expected{{3, 1. / 16}, {5, 1. / 4}, {7, 3. / 8}, {9, 1. / 4},
                                                               {11, 1. / 16}};
    for (const auto& [i, p] : expected) EXPECT_NEAR(run.result.exact_marginal[i], p, 1e-12);
    std::ostringstream os;
    write_run_density_csv(os, run, false);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    int support = 0;
    while (std::getline(in, line)) {
        const auto first = line.find(',');
        const double exact = std::stod(line.substr(line.find(',', first + 1) + 1));
        support += exact > 1e-12;
    }
    EXPECT_EQ(support, 5);
}

TEST(Comparison, TableShape) {
    RunOptions o;
    const auto t = compare_methods({builtin_case(1), builtin_case(4)}, o);
    EXPECT_EQ(t.rows.size(), 16u);
    const auto* q = t.find(4, "qrw");
    ASSERT_NE(q, nullptr);
    ASSERT_TRUE(q->gate_ratio);
    EXPECT_GT(*q->gate_ratio, 1.0);
    EXPECT_TRUE(t.find(1, "qft")->published);
    std::ostringstream csv;
    write_comparison_csv(csv, t);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
              "case,method,component,oneq,twoq,depth,published_oneq,published_twoq,published_depth,gate_ratio,depth_ratio");
}

TEST(CaseJson, CustomCase) {
    const auto j = json::parse(R"({"kind": "case", "name": "wide", "axes": [{"xi_min": -4, "delta": 0.5, "num_qubits": 5}],
        "advected": {"kind": "gaussian", "mean": 1, "std": 1}, "noise": {"kind": "table", "support": [-0.5, 0.5],
        "weights": [0.5, 0.5]}, "qrw_repeats": 2})");
    const auto c = case_from_json(j);
    EXPECT_EQ(c.id, 0);
    EXPECT_EQ(c.qrw_repeats, 2);
    RunOptions o;
    o.shots = 0;
    EXPECT_TRUE(execute_case(c, Method::Qft, o).oracle_ok());
    EXPECT_THROW(density_spec_from_json(json::parse(R"({"kind": "laplace"})")), std::invalid_argument);
}

TEST(Cli, ExitCodes) {
    if (!have_cli()) GTEST_SKIP() << "built without the command-line tool";
    const auto dir = scratch_dir("cli");
    const std::string out = " --out \"" + dir.string() + "\"";
    EXPECT_EQ(run_cli("run --case 4 --method all --shots 2000" + out), 0);
    EXPECT_TRUE(fs::exists(dir / "case4_qrw_manifest.json"));
    EXPECT_EQ(run_cli("compare --case 1" + out), 0);
    EXPECT_TRUE(fs::exists(dir / "resources.csv"));
    EXPECT_EQ(run_cli("--version"), 0);

    EXPECT_EQ(run_cli("run --case 9" + out), 2);
    EXPECT_EQ(run_cli("run --method fft" + out), 2);
    EXPECT_EQ(run_cli("run --case 1 --shots banana" + out), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli(""), 2);

    // Pruning every rotation breaks the adder, so the oracle check must fail.
    EXPECT_EQ(run_cli("run --case 1 --shots 0 --prune-angle 10" + out), 1);
    fs::remove_all(dir);
}

TEST(Cli, ScenarioFile) {
    if (!have_cli()) GTEST_SKIP() << "built without the command-line tool";
    const auto dir = scratch_dir("cli_scenario");
    const auto cfg = dir / "s.json";
    std::ofstream(cfg) << R"({"kind": "scenario", "name": "walk", "axes": [{"num_qubits": 4}],
        "initial": {"kind": "delta", "point": 7}, "dynamics": {"kind": "identity"},
        "noise": {"kind": "gaussian", "mean": 0, "std": 1}, "measurements": [7, 8], "backend": "qft", "steps": 2})";
    EXPECT_EQ(run_cli("run --case \"" + cfg.string() + "\" --out \"" + dir.string() + "\""), 0);
    EXPECT_TRUE(fs::exists(dir / "walk_step2.csv"));
    const auto summary = json::parse(slurp(dir / "walk_summary.json"));
    EXPECT_EQ(summary["steps"].size(), 2u);
    std::ofstream(dir / "bad.json") << "{ not json";
    EXPECT_EQ(run_cli("run --case \"" + (dir / "bad.json").string() + "\""), 2);
    fs::remove_all(dir);
}
