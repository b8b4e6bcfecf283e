// io.hpp
// JSON configuration and result serialization (nlohmann/json).

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgbf/classical.hpp"
#include "qgbf/diffusion.hpp"
#include "qgbf/filter.hpp"

namespace qgbf {

using json = nlohmann::json;

/// Declarative density: gaussian(mean, std) | delta(point) | table(support, weights).
struct DensitySpec {
    enum class Kind { Gaussian, Delta, Table } kind = Kind::Delta;
    std::vector<double> mean, stddev;
    std::vector<double> point;
    std::vector<std::vector<double>> support;
    std::vector<double> weights;

    static DensitySpec gaussian(std::vector<double> mean, std::vector<double> stddev) {
        DensitySpec s;
        s.kind = Kind::Gaussian;
        s.mean = std::move(mean);
        s.stddev = std::move(stddev);
        return s;
    }
    static DensitySpec delta(std::vector<double> point) {
        DensitySpec s;
        s.kind = Kind::Delta;
        s.point = std::move(point);
        return s;
    }
    static DensitySpec table(std::vector<std::vector<double>> support, std::vector<double> weights) {
        DensitySpec s;
        s.kind = Kind::Table;
        s.support = std::move(support);
        s.weights = std::move(weights);
        return s;
    }

    PointMassDensity build(const std::vector<GridAxis>& axes, Warnings* warnings = nullptr) const {
        switch (kind) {
            case Kind::Gaussian: return discretize_gaussian(axes, mean, stddev, warnings);
            case Kind::Delta: return delta_density(axes, point);
            case Kind::Table: return tabulated_density(axes, support, weights);
        }
        throw std::logic_error("DensitySpec: unhandled kind");
    }
};

inline std::vector<double> as_vector(const json& j) {
    if (j.is_number()) return {j.get<double>()};
    return j.get<std::vector<double>>();
}

inline DensitySpec density_spec_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return DensitySpec::gaussian(as_vector(j.at("mean")), as_vector(j.at("std")));
    if (kind == "delta") return DensitySpec::delta(as_vector(j.at("point")));
    if (kind == "table") {
        std::vector<std::vector<double>> support;
        for (const auto& p : j.at("support")) support.push_back(as_vector(p));
        return DensitySpec::table(std::move(support), j.at("weights").get<std::vector<double>>());
    }
    throw std::invalid_argument("density spec: unknown kind '" + kind + "'");
}

inline json to_json(const DensitySpec& s) {
    switch (s.kind) {
        case DensitySpec::Kind::Gaussian: return {{"kind", "gaussian"}, {"mean", s.mean}, {"std", s.stddev}};
        case DensitySpec::Kind::Delta: return {{"kind", "delta"}, {"point", s.point}};
        case DensitySpec::Kind::Table: return {{"kind", "table"}, {"support", s.support}, {"weights", s.weights}};
    }
    return {};
}

/// `{"xi_min": 0, "delta": 1, "num_qubits": 4}`; the noise axes are derived
/// as signed axes of the same geometry.
inline std::vector<GridAxis> axes_from_json(const json& j) {
    std::vector<GridAxis> axes;
    for (const auto& a : j)
        axes.push_back(GridAxis::unsigned_axis(a.value("xi_min", 0.0), a.value("delta", 1.0), a.at("num_qubits").get<int>()));
    if (axes.empty()) throw std::invalid_argument("config: at least one axis required");
    return axes;
}

inline std::vector<GridAxis> noise_axes_for(const std::vector<GridAxis>& state_axes) {
    std::vector<GridAxis> out;
    for (const auto& a : state_axes) out.push_back(GridAxis::signed_axis(a.delta, a.num_qubits));
    return out;
}

inline json to_json(const ResourceReport& r) {
    return {{"oneq", r.one_qubit_gates}, {"twoq", r.two_qubit_gates}, {"depth", r.depth}};
}

inline json to_json(const ResourceBreakdown& r) {
    json j = to_json(r.total);
    j["itemized"] = {{"state_prep", to_json(r.state_prep)}, {"core", to_json(r.core)}, {"swaps", to_json(r.swaps)}};
    return j;
}

/// `{case, method, exact_marginal[], histogram[], resources{oneq,twoq,depth}, wraparound_mass, seed, shots}`
inline json to_json(const DiffusionResult& r, const std::string& case_label, std::uint64_t seed, std::uint64_t shots) {
    json j;
    j["case"] = case_label;
    j["method"] = r.method;
    j["exact_marginal"] = r.exact_marginal;
    j["histogram"] = r.histogram ? json(r.histogram->counts) : json::array();
    j["resources"] = to_json(r.resources);
    j["wraparound_mass"] = r.wraparound_mass;
    j["seed"] = seed;
    j["shots"] = r.histogram ? shots : 0;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

// ---------------------------------------------------------------------------
// Filter scenarios

struct Scenario {
    std::string name = "scenario";
    std::vector<GridAxis> axes;
    DensitySpec initial;
    std::string dynamics_kind = "identity";
    std::vector<double> scale, offset;
    DensitySpec noise;
    std::vector<double> measurement_std;
    std::vector<std::optional<StateVec>> measurements;  // one per step; nullopt skips the update
    Backend backend = Backend::Classical;
    int qrw_repeats = 1;
    int steps = 1;
    std::uint64_t seed = 0;

    DynamicsModel dynamics(Warnings* warnings = nullptr) const {
        auto w = noise.build(noise_axes_for(axes), warnings);
        if (dynamics_kind == "identity") return DynamicsModel::identity(std::move(w));
        if (dynamics_kind == "affine") return DynamicsModel::affine(scale, offset, std::move(w));
        throw std::invalid_argument("scenario: unknown dynamics kind '" + dynamics_kind + "'");
    }

    MeasurementModel measurement() const { return MeasurementModel::gaussian(measurement_std); }
};

inline Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    s.axes = axes_from_json(j.at("axes"));
    const auto d = s.axes.size();
    s.initial = density_spec_from_json(j.at("initial"));
    const auto& dyn = j.at("dynamics");
    s.dynamics_kind = dyn.at("kind").get<std::string>();
    if (s.dynamics_kind == "affine") {
        s.scale = dyn.contains("a") ? as_vector(dyn.at("a")) : std::vector<double>(d, 1.0);
        s.offset = dyn.contains("c") ? as_vector(dyn.at("c")) : std::vector<double>(d, 0.0);
        if (s.scale.size() != d || s.offset.size() != d)
            throw std::invalid_argument("scenario: affine coefficients must match the state dimension");
    }
    s.noise = density_spec_from_json(j.at("noise"));
    const auto& meas = j.value("measurement", json{{"kind", "gaussian"}, {"std", 1.0}});
    if (meas.value("kind", std::string("gaussian")) != "gaussian")
        throw std::invalid_argument("scenario: only gaussian measurement models are supported");
    s.measurement_std = as_vector(meas.at("std"));
    if (s.measurement_std.size() != d) throw std::invalid_argument("scenario: measurement std dimension mismatch");
    s.backend = parse_backend(j.value("backend", std::string("classical")));
    s.qrw_repeats = j.value("repeats", 1);
    s.steps = j.value("steps", 1);
    s.seed = j.value("seed", std::uint64_t{0});
    if (s.steps < 1) throw std::invalid_argument("scenario: steps must be >= 1");
    s.measurements.assign(static_cast<std::size_t>(s.steps), std::nullopt);
    if (j.contains("measurements")) {
        const auto& m = j.at("measurements");
        for (std::size_t k = 0; k < m.size() && k < s.measurements.size(); ++k)
            if (!m[k].is_null()) s.measurements[k] = as_vector(m[k]);
    }
    return s;
}

}  // namespace qgbf
