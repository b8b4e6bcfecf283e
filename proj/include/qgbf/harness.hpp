// harness.hpp
// The four reference diffusion cases, per-method runs with file output, the
// resource comparison table, and filter-scenario runs.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgbf/classical.hpp"
#include "qgbf/diffusion.hpp"
#include "qgbf/filter.hpp"
#include "qgbf/io.hpp"

namespace qgbf {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr double kOracleTolerance = 1e-10;

enum class Method { Qft, Qrw, Classical };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Qft: return "qft";
        case Method::Qrw: return "qrw";
        case Method::Classical: return "classical";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "qft") return Method::Qft;
    if (s == "qrw") return Method::Qrw;
    if (s == "classical") return Method::Classical;
    throw std::invalid_argument("unknown method '" + s + "'");
}

struct CaseSpec {
    int id = 0;  // 1-4 for the built-in cases, 0 for a custom file
    std::string name;
    std::vector<GridAxis> state_axes;
    DensitySpec advected;
    DensitySpec noise;
    int qrw_repeats = 1;

    std::vector<GridAxis> noise_axes() const { return noise_axes_for(state_axes); }
};

/// Four state qubits on {0..15}, noise on signed {-8..7}.
inline CaseSpec builtin_case(int id) {
    CaseSpec c;
    c.id = id;
    c.name = "case" + std::to_string(id);
    c.state_axes = {GridAxis::unsigned_axis(0.0, 1.0, 4)};
    switch (id) {
        case 1:
            c.advected = DensitySpec::gaussian({7.0}, {1.0});
            c.noise = DensitySpec::gaussian({0.0}, {1.0});
            c.qrw_repeats = 1;
            break;
        case 2:
            c.advected = DensitySpec::gaussian({7.0}, {1.0});
            c.noise = DensitySpec::gaussian({0.0}, {2.0});
            c.qrw_repeats = 4;
            break;
        case 3:
            c.advected = DensitySpec::delta({7.0});
            c.noise = DensitySpec::gaussian({0.0}, {1.0});
            c.qrw_repeats = 4;
            break;
        case 4:
            c.advected = DensitySpec::delta({7.0});
            c.noise = DensitySpec::table({{-4.0}, {-2.0}, {0.0}, {2.0}, {4.0}},
                                         {1.0 / 16, 1.0 / 4, 3.0 / 8, 1.0 / 4, 1.0 / 16});
            c.qrw_repeats = 4;
            break;
        default:
            throw std::invalid_argument("unknown case " + std::to_string(id) + " (expected 1-4)");
    }
    return c;
}

/// `{"kind": "case", "name", "axes", "advected", "noise", "qrw_repeats"}`
inline CaseSpec case_from_json(const json& j) {
    CaseSpec c;
    c.id = 0;
    c.name = j.value("name", std::string("custom"));
    c.state_axes = axes_from_json(j.at("axes"));
    c.advected = density_spec_from_json(j.at("advected"));
    c.noise = density_spec_from_json(j.at("noise"));
    c.qrw_repeats = j.value("qrw_repeats", 1);
    return c;
}

/// Published gate counts and depths for the built-in cases.
inline std::optional<ResourceReport> published_resources(int case_id, Method m) {
    if (m == Method::Qft) {
        switch (case_id) {
            case 1: case 2: return ResourceReport{104, 66, 89};
            case 3: return ResourceReport{103, 66, 89};
            case 4: return ResourceReport{95, 59, 89};
        }
    } else if (m == Method::Qrw) {
        switch (case_id) {
            case 1: return ResourceReport{576, 361, 732};
            case 2: return ResourceReport{2259, 1411, 2832};
            case 3: case 4: return ResourceReport{2258, 1411, 2832};
        }
    }
    return std::nullopt;
}

struct RunOptions {
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    std::optional<int> repeats;  // overrides the case's QRW repeat count
    DiffusionOptions diffusion;
    bool dense = false;
};

struct CaseRun {
    CaseSpec spec;
    Method method = Method::Qft;
    int repeats = 0;
    DiffusionResult result;
    std::vector<double> oracle;  // classical reference for what the method computes
    std::vector<double> target;  // advected density convolved with the case's noise
    double oracle_tv = 0.0;
    double target_tv = 0.0;
    std::optional<double> sample_tv;
    Warnings warnings;

    bool oracle_ok() const { return oracle_tv <= kOracleTolerance; }
    std::string label() const { return spec.name + "_" + method_name(method); }
};

inline CaseRun execute_case(const CaseSpec& spec, Method method, const RunOptions& options) {
    CaseRun run;
    run.spec = spec;
    run.method = method;
    run.repeats = options.repeats.value_or(spec.qrw_repeats);

    const auto advected = spec.advected.build(spec.state_axes, &run.warnings);
    const auto noise = spec.noise.build(spec.noise_axes(), &run.warnings);
    run.target = convolve_circular(advected, noise).weights();

    DiffusionOptions dopt = options.diffusion;
    dopt.shots = options.shots;
    dopt.seed = options.seed;

    switch (method) {
        case Method::Qft:
            run.result = diffuse_qft(advected, noise, dopt);
            run.oracle = run.target;
            break;
        case Method::Qrw:
            run.result = diffuse_qrw(advected, run.repeats, dopt);
            run.oracle = convolve_circular(advected, binomial_walk_kernel(spec.noise_axes(), run.repeats)).weights();
            break;
        case Method::Classical: {
            run.result.method = "classical";
            run.result.prior_density = convolve_circular(advected, noise);
            run.result.exact_marginal = run.result.prior_density.weights();
            run.result.wraparound_mass = wraparound_mass(advected, noise);
            run.oracle = convolve_circular_fft(advected, noise).weights();
            break;
        }
    }
    run.warnings.insert(run.warnings.end(), run.result.warnings.begin(), run.result.warnings.end());
    run.oracle_tv = total_variation(run.result.exact_marginal, run.oracle);
    run.target_tv = total_variation(run.result.exact_marginal, run.target);
    if (run.result.histogram)
        run.sample_tv = total_variation(run.result.histogram->frequencies(), run.result.exact_marginal);
    return run;
}

// ---------------------------------------------------------------------------
// Output files

/// `flat_index,coord_dim0..K,exact,[sampled,]oracle,target`
inline void write_run_density_csv(std::ostream& os, const CaseRun& run, bool dense) {
    const auto& d = run.result.prior_density;
    const bool sampled = run.result.histogram.has_value();
    const auto freq = sampled ? run.result.histogram->frequencies() : std::vector<double>{};
    os << "flat_index";
    for (std::size_t j = 0; j < d.dims(); ++j) os << ",coord_dim" << j;
    os << ",exact" << (sampled ? ",sampled" : "") << ",oracle,target\n";
    for (std::uint64_t f = 0; f < d.size(); ++f) {
        const double e = run.result.exact_marginal[f];
        const double s = sampled ? freq[f] : 0.0;
        if (!dense && e == 0.0 && s == 0.0 && run.oracle[f] == 0.0 && run.target[f] == 0.0) continue;
        os << f;
        for (double x : d.coordinates(f)) os << ',' << format_real(x);
        os << ',' << format_real(e);
        if (sampled) os << ',' << format_real(s);
        os << ',' << format_real(run.oracle[f]) << ',' << format_real(run.target[f]) << '\n';
    }
}

inline void write_gnuplot_script(std::ostream& os, const CaseRun& run, const std::string& density_csv) {
    const bool sampled = run.result.histogram.has_value();
    os << "# " << run.label() << "\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'x'\nset ylabel 'probability'\n"
       << "set title '" << run.spec.name << " (" << method_name(run.method) << ")'\n"
       << "plot '" << density_csv << "' using 2:3 with lines lw 2";
    if (sampled) os << ", '' using 2:4 with impulses lw 6";
    os << ", '' using 2:" << (sampled ? 6 : 5) << " with linespoints dt 2\n";
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

/// Writes density CSV, histogram CSV (when sampled), result JSON, resource
/// JSON, gnuplot script and run manifest into `out_dir`. Returns the paths.
inline std::vector<std::filesystem::path> write_case_outputs(const CaseRun& run, const RunOptions& options,
                                                             const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> files;
    const std::string stem = run.label();
    const auto emit = [&](const std::string& name, const std::string& content) {
        const auto p = out_dir / name;
        write_text_file(p, content);
        files.push_back(p);
    };

    std::ostringstream density;
    write_run_density_csv(density, run, options.dense);
    emit(stem + "_density.csv", density.str());

    if (run.result.histogram) {
        std::ostringstream hist;
        const GridAxis* axis = run.spec.state_axes.size() == 1 ? &run.spec.state_axes[0] : nullptr;
        write_histogram_csv(hist, *run.result.histogram, run.result.exact_marginal, axis);
        emit(stem + "_histogram.csv", hist.str());
    }

    emit(stem + "_result.json", to_json(run.result, run.spec.name, options.seed, options.shots).dump(2) + "\n");
    emit(stem + "_resources.json", to_json(run.result.resources).dump(2) + "\n");

    std::ostringstream plot;
    write_gnuplot_script(plot, run, stem + "_density.csv");
    emit(stem + "_plot.gp", plot.str());

    json manifest;
    manifest["version"] = kVersion;
    manifest["case"] = run.spec.name;
    manifest["method"] = method_name(run.method);
    manifest["seed"] = options.seed;
    manifest["shots"] = run.result.histogram ? options.shots : 0;
    if (run.method == Method::Qrw) manifest["repeats"] = run.repeats;
    manifest["advected"] = to_json(run.spec.advected);
    manifest["noise"] = to_json(run.spec.noise);
    manifest["options"] = {{"elide_swaps", options.diffusion.elide_swaps},
                           {"prune_angle", options.diffusion.prune_angle},
                           {"alias_threshold", options.diffusion.alias_threshold},
                           {"walk_shift", options.diffusion.walk_shift == WalkShift::Draper ? "draper" : "mcx"},
                           {"dense", options.dense}};
    manifest["oracle_tv"] = run.oracle_tv;
    manifest["oracle_ok"] = run.oracle_ok();
    manifest["target_tv"] = run.target_tv;
    if (run.sample_tv) manifest["sample_tv"] = *run.sample_tv;
    manifest["wraparound_mass"] = run.result.wraparound_mass;
    manifest["warnings"] = run.warnings;
    json names = json::array();
    for (const auto& f : files) names.push_back(f.filename().string());
    manifest["files"] = names;
    emit(stem + "_manifest.json", manifest.dump(2) + "\n");
    return files;
}

// ---------------------------------------------------------------------------
// Resource comparison

struct ComparisonRow {
    int case_id = 0;
    std::string case_name;
    std::string method;
    std::string component;  // total | state_prep | core | swaps
    ResourceReport ours;
    std::optional<ResourceReport> published;
    std::optional<double> gate_ratio;   // qrw / qft totals, on qrw total rows
    std::optional<double> depth_ratio;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;

    const ComparisonRow* find(int case_id, const std::string& method, const std::string& component = "total") const {
        for (const auto& r : rows)
            if (r.case_id == case_id && r.method == method && r.component == component) return &r;
        return nullptr;
    }
};

inline ComparisonTable compare_methods(const std::vector<CaseSpec>& cases, const RunOptions& options) {
    RunOptions quiet = options;
    quiet.shots = 0;
    ComparisonTable table;
    for (const auto& spec : cases) {
        const auto qft = execute_case(spec, Method::Qft, quiet);
        const auto qrw = execute_case(spec, Method::Qrw, quiet);
        for (const auto* run : {&qft, &qrw}) {
            const auto& res = run->result.resources;
            const std::string m = method_name(run->method);
            ComparisonRow total{spec.id, spec.name, m, "total", res.total,
                                published_resources(spec.id, run->method), std::nullopt, std::nullopt};
            if (run == &qrw) {
                const auto& q = qft.result.resources.total;
                total.gate_ratio = static_cast<double>(res.total.total_gates()) / static_cast<double>(q.total_gates());
                total.depth_ratio = static_cast<double>(res.total.depth) / static_cast<double>(q.depth);
            }
            table.rows.push_back(total);
            table.rows.push_back({spec.id, spec.name, m, "state_prep", res.state_prep, std::nullopt, {}, {}});
            table.rows.push_back({spec.id, spec.name, m, "core", res.core, std::nullopt, {}, {}});
            table.rows.push_back({spec.id, spec.name, m, "swaps", res.swaps, std::nullopt, {}, {}});
        }
    }
    return table;
}

inline void write_comparison_csv(std::ostream& os, const ComparisonTable& t) {
    os << "case,method,component,oneq,twoq,depth,published_oneq,published_twoq,published_depth,gate_ratio,depth_ratio\n";
    const auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    for (const auto& r : t.rows) {
        os << r.case_name << ',' << r.method << ',' << r.component << ',' << r.ours.one_qubit_gates << ','
           << r.ours.two_qubit_gates << ',' << r.ours.depth << ',';
        if (r.published)
            os << r.published->one_qubit_gates << ',' << r.published->two_qubit_gates << ',' << r.published->depth;
        else
            os << ",,";
        os << ',' << opt(r.gate_ratio) << ',' << opt(r.depth_ratio) << '\n';
    }
}

inline void write_comparison_text(std::ostream& os, const ComparisonTable& t) {
    const auto fmt_pub = [](const std::optional<ResourceReport>& p) {
        if (!p) return std::string("-");
        std::ostringstream s;
        s << p->one_qubit_gates << '/' << p->two_qubit_gates << '/' << p->depth;
        return s.str();
    };
    os << std::left << std::setw(8) << "case" << std::setw(7) << "method" << std::setw(12) << "component"
       << std::right << std::setw(7) << "1Q" << std::setw(7) << "2Q" << std::setw(7) << "depth" << "  "
       << std::left << std::setw(16) << "published" << "ratios (qrw/qft)\n";
    for (const auto& r : t.rows) {
        const bool sub = r.component != "total";
        os << std::left << std::setw(8) << (sub ? "" : r.case_name) << std::setw(7) << (sub ? "" : r.method)
           << std::setw(12) << (sub ? "  " + r.component : r.component) << std::right << std::setw(7)
           << r.ours.one_qubit_gates << std::setw(7) << r.ours.two_qubit_gates << std::setw(7)
           << (r.component == "swaps" ? std::string("-") : std::to_string(r.ours.depth)) << "  " << std::left
           << std::setw(16) << fmt_pub(r.published);
        if (r.gate_ratio)
            os << "gates x" << std::fixed << std::setprecision(2) << *r.gate_ratio << ", depth x" << *r.depth_ratio
               << std::defaultfloat;
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// Filter scenarios

struct ScenarioRun {
    Scenario scenario;
    std::vector<StepResult> steps;
    PointMassDensity initial;
};

inline ScenarioRun run_scenario(const Scenario& s, const DiffusionOptions& options = {}, Warnings* warnings = nullptr) {
    ScenarioRun run;
    run.scenario = s;
    run.initial = s.initial.build(s.axes, warnings);
    const auto dynamics = s.dynamics(warnings);
    const auto meas = s.measurement();
    DiffusionBackend backend{s.backend, s.qrw_repeats, options, true};
    backend.options.shots = 0;
    PointMassDensity current = run.initial;
    for (int k = 0; k < s.steps; ++k) {
        auto step = gbf_step(current, dynamics, {}, meas, s.measurements[static_cast<std::size_t>(k)], backend);
        current = step.posterior;
        run.steps.push_back(std::move(step));
    }
    return run;
}

inline std::vector<std::filesystem::path> write_scenario_outputs(const ScenarioRun& run, bool dense,
                                                                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> files;
    json summary;
    summary["version"] = kVersion;
    summary["scenario"] = run.scenario.name;
    summary["backend"] = backend_name(run.scenario.backend);
    summary["seed"] = run.scenario.seed;
    json steps = json::array();
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
        const auto& st = run.steps[k];
        std::ostringstream csv;
        write_density_csv(csv, st.posterior, dense);
        const auto p = out_dir / (run.scenario.name + "_step" + std::to_string(k + 1) + ".csv");
        write_text_file(p, csv.str());
        files.push_back(p);
        json js;
        js["step"] = k + 1;
        js["mean"] = st.posterior.mean(0);
        js["variance"] = st.posterior.variance(0);
        js["log_evidence"] = std::isnan(st.diagnostics.log_evidence) ? json(nullptr) : json(st.diagnostics.log_evidence);
        js["wraparound_mass"] = st.diagnostics.wraparound_mass;
        if (st.diagnostics.tv_vs_classical) js["tv_vs_classical"] = *st.diagnostics.tv_vs_classical;
        if (st.diagnostics.resources) js["resources"] = to_json(*st.diagnostics.resources);
        if (!st.diagnostics.warnings.empty()) js["warnings"] = st.diagnostics.warnings;
        steps.push_back(js);
    }
    summary["steps"] = steps;
    const auto p = out_dir / (run.scenario.name + "_summary.json");
    write_text_file(p, summary.dump(2) + "\n");
    files.push_back(p);
    return files;
}

}  // namespace qgbf
