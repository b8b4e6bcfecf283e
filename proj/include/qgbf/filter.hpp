// filter.hpp
// One grid-based filter step (advect, diffuse, update) with a pluggable
// diffusion backend.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgbf/classical.hpp"
#include "qgbf/diffusion.hpp"

namespace qgbf {

enum class Backend { Classical, Qft, Qrw };

inline const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Classical: return "classical";
        case Backend::Qft: return "qft";
        case Backend::Qrw: return "qrw";
    }
    return "?";
}

inline Backend parse_backend(const std::string& s) {
    if (s == "classical") return Backend::Classical;
    if (s == "qft") return Backend::Qft;
    if (s == "qrw") return Backend::Qrw;
    throw std::invalid_argument("unknown diffusion backend '" + s + "'");
}

struct DiffusionBackend {
    Backend kind = Backend::Classical;
    int qrw_repeats = 1;
    DiffusionOptions options;
    bool compare_with_classical = true;  // quantum backends also run the classical path for a TV check
};

struct StepDiagnostics {
    PointMassDensity advected;
    PointMassDensity predicted;
    std::optional<ResourceBreakdown> resources;
    std::optional<double> tv_vs_classical;
    double log_evidence = std::numeric_limits<double>::quiet_NaN();  // NaN when no measurement
    double wraparound_mass = 0.0;
    Warnings warnings;
};

struct StepResult {
    PointMassDensity posterior;
    StepDiagnostics diagnostics;
};

/// Diffusion through the selected backend; returns the predicted density.
inline PointMassDensity diffuse(const PointMassDensity& advected, const PointMassDensity& noise,
                                const DiffusionBackend& backend, StepDiagnostics& diag) {
    switch (backend.kind) {
        case Backend::Classical:
            diag.wraparound_mass = wraparound_mass(advected, noise);
            return convolve_circular(advected, noise);
        case Backend::Qft: {
            auto r = diffuse_qft(advected, noise, backend.options);
            diag.resources = r.resources;
            diag.wraparound_mass = r.wraparound_mass;
            diag.warnings.insert(diag.warnings.end(), r.warnings.begin(), r.warnings.end());
            return r.prior_density;
        }
        case Backend::Qrw: {
            auto r = diffuse_qrw(advected, backend.qrw_repeats, backend.options);
            diag.resources = r.resources;
            diag.wraparound_mass = r.wraparound_mass;
            return r.prior_density;
        }
    }
    throw std::logic_error("diffuse: unhandled backend");
}

/// advect -> diffuse -> measurement update. Without a measurement the
/// posterior is the predicted density.
inline StepResult gbf_step(const PointMassDensity& posterior, const DynamicsModel& dynamics, const StateVec& control,
                           const MeasurementModel& measurement, const std::optional<StateVec>& z,
                           const DiffusionBackend& backend) {
    StepDiagnostics diag;
    diag.advected = advect(posterior, dynamics, control, posterior.axes(), &diag.warnings);
    diag.predicted = diffuse(diag.advected, dynamics.process_noise, backend, diag);
    if (backend.kind != Backend::Classical && backend.compare_with_classical)
        diag.tv_vs_classical =
            total_variation(diag.predicted.weights(), convolve_circular(diag.advected, dynamics.process_noise).weights());

    if (!z) return {diag.predicted, std::move(diag)};
    auto upd = measurement_update(diag.predicted, measurement, *z);
    diag.log_evidence = upd.log_evidence;
    return {std::move(upd.posterior), std::move(diag)};
}

}  // namespace qgbf
