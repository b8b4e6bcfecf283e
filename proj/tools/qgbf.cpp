// qgbf: run the reference diffusion cases, compare circuit resources, and
// run filter scenarios from JSON.
//
// Exit codes: 0 success, 1 oracle check failed, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgbf/qgbf.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOracle = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
    if (const char* env = std::getenv("QGBF_OUT"); env && *env) return env;
    return "qgbf_out";
}

qgbf::json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open " + path);
    try {
        return qgbf::json::parse(f);
    } catch (const qgbf::json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

// A case argument is 1-4 or a JSON file.
struct CaseArg {
    std::optional<qgbf::CaseSpec> spec;
    std::optional<qgbf::Scenario> scenario;
};

CaseArg parse_case(const std::string& arg) {
    if (arg.size() == 1 && arg[0] >= '1' && arg[0] <= '4') return {qgbf::builtin_case(arg[0] - '0'), std::nullopt};
    if (!std::filesystem::exists(arg)) throw UsageError("unknown case '" + arg + "' (expected 1-4 or a JSON file)");
    const auto j = read_json(arg);
    try {
        const auto kind = j.value("kind", std::string(j.contains("steps") ? "scenario" : "case"));
        if (kind == "scenario") return {std::nullopt, qgbf::scenario_from_json(j)};
        if (kind == "case") return {qgbf::case_from_json(j), std::nullopt};
        throw UsageError(arg + ": unknown kind '" + kind + "'");
    } catch (const qgbf::json::exception& e) {
        throw UsageError(arg + ": " + e.what());
    }
}

std::vector<qgbf::Method> parse_methods(const std::string& m) {
    if (m == "all") return {qgbf::Method::Qft, qgbf::Method::Qrw, qgbf::Method::Classical};
    try {
        return {qgbf::parse_method(m)};
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

qgbf::WalkShift parse_walk_shift(const std::string& s) {
    if (s == "mcx") return qgbf::WalkShift::MultiControlledX;
    if (s == "draper") return qgbf::WalkShift::Draper;
    throw UsageError("unknown walk shift '" + s + "' (expected mcx or draper)");
}

struct CommonFlags {
    std::vector<std::string> cases;
    bool elide_swaps = false;
    double prune_angle = 0.0;
    std::string walk_shift = "mcx";
    std::string out = default_out_dir();
};

void add_common(CLI::App* app, CommonFlags& f) {
    app->add_option("--case", f.cases, "Case id 1-4 or JSON file (repeatable; default all four)");
    app->add_flag("--elide-swaps", f.elide_swaps, "Drop QFT swap networks (bit-reversed Fourier register)");
    app->add_option("--prune-angle", f.prune_angle, "Drop rotations with |angle| below this value")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--walk-shift", f.walk_shift, "QRW shift construction: mcx or draper");
    app->add_option("--out", f.out, "Output directory (default $QGBF_OUT or ./qgbf_out)");
}

std::string summarize(const qgbf::CaseRun& run) {
    std::ostringstream os;
    const auto& r = run.result.resources.total;
    os << run.label() << ": oracle TV " << qgbf::format_real(run.oracle_tv) << (run.oracle_ok() ? " ok" : " FAILED")
       << ", target TV " << qgbf::format_real(run.target_tv);
    if (run.sample_tv) os << ", sample TV " << qgbf::format_real(*run.sample_tv);
    os << ", wraparound " << qgbf::format_real(run.result.wraparound_mass);
    if (run.method != qgbf::Method::Classical)
        os << ", resources 1Q=" << r.one_qubit_gates << " 2Q=" << r.two_qubit_gates << " depth=" << r.depth;
    for (const auto& w : run.warnings) os << "\n  warning: " << w;
    return os.str();
}

int cmd_run(const CommonFlags& common, const std::string& method, std::uint64_t shots, std::uint64_t seed,
            std::optional<int> repeats, double alias_threshold, bool dense, bool parallel) {
    qgbf::RunOptions options;
    options.shots = shots;
    options.seed = seed;
    options.repeats = repeats;
    options.dense = dense;
    options.diffusion.elide_swaps = common.elide_swaps;
    options.diffusion.prune_angle = common.prune_angle;
    options.diffusion.alias_threshold = alias_threshold;
    options.diffusion.walk_shift = parse_walk_shift(common.walk_shift);

    const auto methods = parse_methods(method);
    std::vector<CaseArg> cases;
    if (common.cases.empty())
        for (int i = 1; i <= 4; ++i) cases.push_back({qgbf::builtin_case(i), std::nullopt});
    for (const auto& c : common.cases) cases.push_back(parse_case(c));

    int status = kExitOk;
    for (const auto& c : cases) {
        if (!c.scenario) continue;
        auto run = qgbf::run_scenario(*c.scenario, options.diffusion);
        qgbf::write_scenario_outputs(run, dense, common.out);
        for (std::size_t k = 0; k < run.steps.size(); ++k) {
            const auto& st = run.steps[k];
            std::cout << c.scenario->name << " step " << k + 1 << " (" << qgbf::backend_name(c.scenario->backend)
                      << "): mean " << qgbf::format_real(st.posterior.mean(0)) << ", variance "
                      << qgbf::format_real(st.posterior.variance(0));
            if (st.diagnostics.tv_vs_classical) {
                std::cout << ", TV vs classical " << qgbf::format_real(*st.diagnostics.tv_vs_classical);
                if (c.scenario->backend == qgbf::Backend::Qft && *st.diagnostics.tv_vs_classical > qgbf::kOracleTolerance)
                    status = kExitOracle;
            }
            std::cout << '\n';
        }
    }

    std::vector<std::pair<qgbf::CaseSpec, qgbf::Method>> jobs;
    for (const auto& c : cases)
        if (c.spec)
            for (auto m : methods) jobs.emplace_back(*c.spec, m);

    const auto job = [&](const qgbf::CaseSpec& spec, qgbf::Method m) {
        auto run = qgbf::execute_case(spec, m, options);
        qgbf::write_case_outputs(run, options, common.out);
        return run;
    };
    std::vector<qgbf::CaseRun> runs;
    if (parallel) {
        std::vector<std::future<qgbf::CaseRun>> futures;
        for (const auto& [spec, m] : jobs) futures.push_back(std::async(std::launch::async, job, spec, m));
        for (auto& f : futures) runs.push_back(f.get());
    } else {
        for (const auto& [spec, m] : jobs) runs.push_back(job(spec, m));
    }
    for (const auto& run : runs) {
        std::cout << summarize(run) << '\n';
        if (!run.oracle_ok()) status = kExitOracle;
    }
    std::cout << "output: " << common.out << '\n';
    return status;
}

int cmd_compare(const CommonFlags& common) {
    qgbf::RunOptions options;
    options.diffusion.elide_swaps = common.elide_swaps;
    options.diffusion.prune_angle = common.prune_angle;
    options.diffusion.walk_shift = parse_walk_shift(common.walk_shift);
    std::vector<qgbf::CaseSpec> cases;
    if (common.cases.empty())
        for (int i = 1; i <= 4; ++i) cases.push_back(qgbf::builtin_case(i));
    for (const auto& c : common.cases) {
        auto arg = parse_case(c);
        if (!arg.spec) throw UsageError("compare takes diffusion cases, not filter scenarios");
        cases.push_back(*arg.spec);
    }
    const auto table = qgbf::compare_methods(cases, options);
    std::ostringstream text, csv;
    qgbf::write_comparison_text(text, table);
    qgbf::write_comparison_csv(csv, table);
    std::filesystem::create_directories(common.out);
    qgbf::write_text_file(std::filesystem::path(common.out) / "resources.txt", text.str());
    qgbf::write_text_file(std::filesystem::path(common.out) / "resources.csv", csv.str());
    std::cout << text.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum diffusion for grid-based Bayesian filters"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("qgbf ") + qgbf::kVersion);

    CommonFlags run_flags, cmp_flags;
    std::string method = "qft";
    std::uint64_t shots = 100000, seed = 0;
    std::optional<int> repeats;
    double alias_threshold = 1e-3;
    bool dense = false, parallel = false;

    auto* run = app.add_subcommand("run", "Run diffusion cases or a filter scenario and write CSV/JSON outputs");
    add_common(run, run_flags);
    run->add_option("--method", method, "qft, qrw, classical or all");
    run->add_option("--shots", shots, "Sampled shots (0 disables sampling)");
    run->add_option("--seed", seed, "Sampling seed");
    run->add_option("--repeats", repeats, "QRW repeat count override")->check(CLI::PositiveNumber);
    run->add_option("--alias-threshold", alias_threshold, "Warn when wrapped probability exceeds this")
        ->check(CLI::NonNegativeNumber);
    run->add_flag("--dense", dense, "Write every grid cell, including zeros");
    run->add_flag("--parallel", parallel, "Run independent case/method pairs concurrently");

    auto* cmp = app.add_subcommand("compare", "Gate-count and depth comparison of the QFT and QRW methods");
    add_common(cmp, cmp_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags, method, shots, seed, repeats, alias_threshold, dense, parallel);
        return cmd_compare(cmp_flags);
    } catch (const UsageError& e) {
        std::cerr << "qgbf: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qgbf: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "qgbf: " << e.what() << '\n';
        return kExitOracle;
    }
}
