// diffusion.hpp
// Quantum diffusion step: the per-dimension Draper adder, the end-to-end
// QFT-based pipeline, and the coined quantum-random-walk baseline.
//
// The advected density sits in the state registers and the process noise in
// the noise registers, both amplitude encoded. Adding the noise register into
// the state register (mod 2^n) makes the state marginal the circular
// convolution of the two densities. The noise register is traced out at
// readout, not uncomputed, so it stays entangled with the state afterwards.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgbf/circuit.hpp"
#include "qgbf/classical.hpp"
#include "qgbf/grid.hpp"
#include "qgbf/resources.hpp"
#include "qgbf/state_prep.hpp"
#include "qgbf/statevector.hpp"

namespace qgbf {

/// How the walk realizes its +-1 shifts.
enum class WalkShift {
    MultiControlledX,  // coin-controlled ripple increment / decrement
    Draper,            // QFT, coin-controlled constant phases, inverse QFT
};

struct DiffusionOptions {
    bool elide_swaps = false;
    double prune_angle = 0.0;  // drop rotations below this magnitude; 0 keeps all
    double alias_threshold = 1e-3;
    std::uint64_t shots = 0;  // 0 skips sampling
    std::uint64_t seed = 0;
    WalkShift walk_shift = WalkShift::MultiControlledX;
};

/// Resource totals on the decomposed circuit, with the state-preparation,
/// diffusion-core and swap contributions itemized.
struct ResourceBreakdown {
    ResourceReport total;
    ResourceReport state_prep;
    ResourceReport core;
    ResourceReport swaps;  // counts only; depth left at 0
};

struct DiffusionResult {
    std::string method;
    PointMassDensity prior_density;  // the diffused prediction, on the state axes
    std::vector<double> exact_marginal;
    std::optional<ShotHistogram> histogram;
    ResourceBreakdown resources;
    double wraparound_mass = 0.0;
    Warnings warnings;
};

// ---------------------------------------------------------------------------
// Circuits

/// |a>_noise |b>_state -> |a>_noise |b + a mod 2^n>_state on dimension j,
/// identity on every other register.
inline Circuit draper_adder(const RegisterLayout& layout, int dimension, bool elide_swaps = false) {
    const auto& state = layout.get(RegisterRole::State, dimension);
    const auto& noise = layout.get(RegisterRole::Noise, dimension);
    if (state.qubits.size() != noise.qubits.size())
        throw std::invalid_argument("draper_adder: noise and state registers of dimension " +
                                    std::to_string(dimension) + " differ in width");
    const int n = static_cast<int>(state.qubits.size());
    const int width = layout.num_qubits();

    Circuit c(width);
    c.append(qft(state.qubits, !elide_swaps, width));
    // Fourier bit k_q lives on state qubit q, or n-1-q when the swaps are elided.
    // Phase e^{2 pi i a k / 2^n} factors into CP(2 pi 2^{p+q} / 2^n) on (a_p, k_q), p + q < n.
    for (int q = n - 1; q >= 0; --q) {
        const int target = state.qubits[static_cast<std::size_t>(elide_swaps ? n - 1 - q : q)];
        for (int p = n - 1 - q; p >= 0; --p)
            c.append(Gate::cphase(noise.qubits[static_cast<std::size_t>(p)], target,
                                  2.0 * std::numbers::pi / std::ldexp(1.0, n - p - q)));
    }
    c.append(inverse_qft(state.qubits, !elide_swaps, width));
    return c;
}

namespace detail {

inline void check_coin(const RegisterLayout& layout, int coin_qubit) {
    if (coin_qubit < 0 || coin_qubit >= layout.num_qubits())
        throw std::invalid_argument("qrw_step: coin qubit " + std::to_string(coin_qubit) + " outside layout");
    for (const auto& r : layout.registers())
        if (r.role != RegisterRole::Coin)
            for (int q : r.qubits)
                if (q == coin_qubit)
                    throw std::invalid_argument("qrw_step: coin qubit " + std::to_string(coin_qubit) +
                                                " overlaps data register " + r.name);
}

// Coin-controlled +1 on `reg`: flip bit i when the coin and all lower bits are set.
inline void append_controlled_increment(Circuit& c, int coin, const std::vector<int>& reg) {
    for (int i = static_cast<int>(reg.size()) - 1; i >= 0; --i) {
        std::vector<int> controls{coin};
        controls.insert(controls.end(), reg.begin(), reg.begin() + i);
        append_mcx(c, controls, reg[static_cast<std::size_t>(i)]);
    }
}

}  // namespace detail

/// One coined walk step on dimension j: H on the coin, +1 (mod 2^n) when the
/// coin is 1, -1 when it is 0.
inline Circuit qrw_step(const RegisterLayout& layout, int dimension, int coin_qubit,
                        WalkShift shift = WalkShift::MultiControlledX, bool elide_swaps = false) {
    detail::check_coin(layout, coin_qubit);
    const auto& reg = layout.get(RegisterRole::State, dimension).qubits;
    const int width = layout.num_qubits();
    Circuit c(width);
    c.append(Gate::h(coin_qubit));

    if (shift == WalkShift::MultiControlledX) {
        detail::append_controlled_increment(c, coin_qubit, reg);
        // -1 = X^n (+1) X^n, triggered on coin == 0.
        c.append(Gate::x(coin_qubit));
        for (int q : reg) c.append(Gate::x(q));
        detail::append_controlled_increment(c, coin_qubit, reg);
        for (int q : reg) c.append(Gate::x(q));
        c.append(Gate::x(coin_qubit));
        return c;
    }

    const int n = static_cast<int>(reg.size());
    c.append(qft(reg, !elide_swaps, width));
    const auto add_constant = [&](double sign) {
        for (int q = 0; q < n; ++q) {
            const int target = reg[static_cast<std::size_t>(elide_swaps ? n - 1 - q : q)];
            c.append(Gate::cphase(coin_qubit, target, sign * 2.0 * std::numbers::pi / std::ldexp(1.0, n - q)));
        }
    };
    add_constant(+1.0);
    c.append(Gate::x(coin_qubit));
    add_constant(-1.0);
    c.append(Gate::x(coin_qubit));
    c.append(inverse_qft(reg, !elide_swaps, width));
    return c;
}

/// Amplitude-encoding circuit for the registers of `role`.
inline Circuit preparation_circuit(const RegisterLayout& layout, RegisterRole role, const PointMassDensity& density) {
    return state_preparation(layout.qubits(role), density.weights(), layout.num_qubits());
}

inline ResourceBreakdown itemize_resources(const Circuit& prep, const Circuit& core, double prune_angle) {
    const Circuit p = prune_small_rotations(prep, prune_angle);
    const Circuit k = prune_small_rotations(core, prune_angle);
    ResourceBreakdown r;
    r.state_prep = resource_report(decompose(p));
    r.core = resource_report(decompose(k));
    r.total = resource_report(decompose(concat(p, k)));
    for (const auto& g : k.gates())
        if (g.kind == GateKind::Swap) r.swaps.two_qubit_gates += 3;
    return r;
}

// ---------------------------------------------------------------------------
// Aliasing

/// Probability that the un-wrapped index sum leaves [0, 2^n - 1] in some dimension.
inline double wraparound_mass(const PointMassDensity& advected, const PointMassDensity& noise) {
    require_shared_axes(advected, noise, "wraparound_mass");
    double mass = 0.0;
    for (std::uint64_t fa = 0; fa < advected.size(); ++fa) {
        if (advected[fa] == 0.0) continue;
        const auto ia = advected.register_indices(fa);
        for (std::uint64_t fb = 0; fb < noise.size(); ++fb) {
            if (noise[fb] == 0.0) continue;
            const auto ib = noise.register_indices(fb);
            bool wraps = false;
            for (std::size_t j = 0; j < ia.size() && !wraps; ++j) {
                const auto& nax = noise.axes()[j];
                const std::int64_t offset =
                    nax.is_signed ? signed_decode(nax, ib[j]) : static_cast<std::int64_t>(ib[j]);
                const std::int64_t sum = static_cast<std::int64_t>(ia[j]) + offset;
                wraps = sum < 0 || sum >= static_cast<std::int64_t>(advected.axes()[j].size());
            }
            if (wraps) mass += advected[fa] * noise[fb];
        }
    }
    return mass;
}

// ---------------------------------------------------------------------------
// Pipelines

namespace detail {

inline void finish_result(DiffusionResult& r, const Statevector& sv, const RegisterLayout& layout,
                          const DiffusionOptions& options) {
    const auto sq = layout.qubits(RegisterRole::State);
    r.exact_marginal = marginal_probabilities(sv, sq);
    r.prior_density = PointMassDensity::normalized(layout.axes(RegisterRole::State), r.exact_marginal);
    if (options.shots > 0) r.histogram = sample_distribution(r.exact_marginal, options.shots, options.seed);
}

}  // namespace detail

/// Loads advected (x) noise, adds the noise register into the state register
/// dimension by dimension, and reads out the state marginal.
inline DiffusionResult diffuse_qft(const PointMassDensity& advected, const PointMassDensity& noise,
                                   const DiffusionOptions& options = {}) {
    require_shared_axes(advected, noise, "diffuse_qft");
    for (const auto& a : noise.axes())
        if (!a.is_signed) throw std::invalid_argument("diffuse_qft: noise axes must be signed");
    for (const auto& a : advected.axes())
        if (a.is_signed) throw std::invalid_argument("diffuse_qft: advected axes must be unsigned");

    const auto layout = RegisterLayout::for_diffusion(advected.axes(), noise.axes());
    Circuit core(layout.num_qubits());
    for (int j = 0; j < static_cast<int>(advected.dims()); ++j)
        core.append(draper_adder(layout, j, options.elide_swaps));

    Circuit prep = preparation_circuit(layout, RegisterRole::State, advected);
    prep.append(preparation_circuit(layout, RegisterRole::Noise, noise));

    Statevector sv = load_product_state(layout, advected, noise);
    sv.apply(prune_small_rotations(core, options.prune_angle));

    DiffusionResult r;
    r.method = "qft";
    detail::finish_result(r, sv, layout, options);
    r.resources = itemize_resources(prep, core, options.prune_angle);
    r.wraparound_mass = wraparound_mass(advected, noise);
    if (r.wraparound_mass > options.alias_threshold) {
        std::ostringstream os;
        os << "aliasing: " << r.wraparound_mass << " of the probability wrapped around the register (threshold "
           << options.alias_threshold << ")";
        r.warnings.push_back(os.str());
    }
    return r;
}

/// Coined-walk baseline: `repeats` steps per dimension, each with its own
/// fresh coin qubit, so the state marginal is the advected density convolved
/// with the r-step binomial kernel.
inline DiffusionResult diffuse_qrw(const PointMassDensity& advected, int repeats, const DiffusionOptions& options = {}) {
    if (repeats < 1) throw std::invalid_argument("diffuse_qrw: repeats must be >= 1");
    const int dims = static_cast<int>(advected.dims());
    const int coins = repeats * dims;
    if (advected.total_qubits() + coins > 26)
        throw std::invalid_argument("diffuse_qrw: " + std::to_string(coins) + " coin qubits do not fit the simulator");

    const auto layout = RegisterLayout::for_diffusion(advected.axes(), {}, coins);
    const auto coin_qubits = layout.qubits(RegisterRole::Coin);
    Circuit core(layout.num_qubits());
    for (int step = 0; step < repeats; ++step)
        for (int j = 0; j < dims; ++j)
            core.append(qrw_step(layout, j, coin_qubits[static_cast<std::size_t>(step * dims + j)],
                                 options.walk_shift, options.elide_swaps));

    Statevector sv = load_product_state(layout, advected);
    sv.apply(prune_small_rotations(core, options.prune_angle));

    DiffusionResult r;
    r.method = "qrw";
    detail::finish_result(r, sv, layout, options);
    r.resources = itemize_resources(preparation_circuit(layout, RegisterRole::State, advected), core,
                                    options.prune_angle);
    std::vector<GridAxis> kernel_axes;
    for (const auto& a : advected.axes()) kernel_axes.push_back(GridAxis::signed_axis(a.delta, a.num_qubits));
    r.wraparound_mass = wraparound_mass(advected, binomial_walk_kernel(kernel_axes, repeats));
    return r;
}

}  // namespace qgbf
