// state_prep.hpp
// Amplitude-encoding circuits: |0...0> -> sum_i sqrt(p_i) |i>.
//
// Binary-split tree from the most significant qubit down. Level c rotates
// qubit n-1-c by a uniformly controlled RY whose controls are the c qubits
// above it; each multiplexor is realized with 2^c RY and 2^c CNOT gates in
// Gray-code order (a lone RY at the root).

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qgbf/circuit.hpp"

namespace qgbf {

/// Uniformly controlled RY: applies RY(angles[x]) to `target` when the
/// controls hold x (controls[0] least significant).
inline void append_multiplexed_ry(Circuit& c, const std::vector<int>& controls, int target,
                                  const std::vector<double>& angles, double drop_below = 1e-14) {
    const std::size_t k = controls.size();
    const std::size_t count = std::size_t{1} << k;
    if (angles.size() != count) throw std::invalid_argument("multiplexed RY: need 2^k angles");
    if (k == 0) {
        if (std::abs(angles[0]) >= drop_below) c.append(Gate::ry(target, angles[0]));
        return;
    }
    // theta_i = 2^-k sum_x (-1)^{popcount(x & gray(i))} angle_x
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t gray = i ^ (i >> 1);
        double theta = 0.0;
        for (std::size_t x = 0; x < count; ++x)
            theta += (std::popcount(x & gray) % 2 ? -1.0 : 1.0) * angles[x];
        theta /= static_cast<double>(count);
        if (std::abs(theta) >= drop_below) c.append(Gate::ry(target, theta));
        const std::size_t next_gray = ((i + 1) % count) ^ (((i + 1) % count) >> 1);
        const int flipped = std::countr_zero(gray ^ next_gray);
        c.append(Gate::cnot(controls[static_cast<std::size_t>(flipped)], target));
    }
}

/// Circuit preparing sqrt(probabilities) on `qubits` (qubits[0] least
/// significant) from |0...0>. Levels whose rotations are all zero are omitted.
inline Circuit state_preparation(const std::vector<int>& qubits, const std::vector<double>& probabilities,
                                 int width = -1) {
    check_register(qubits, "state_preparation");
    const int n = static_cast<int>(qubits.size());
    if (probabilities.size() != (std::size_t{1} << n))
        throw std::invalid_argument("state_preparation: need 2^n probabilities");
    for (double p : probabilities)
        if (!(p >= 0.0)) throw std::invalid_argument("state_preparation: negative probability");

    Circuit c(std::max(width, required_width(qubits)));
    for (int level = 0; level < n; ++level) {
        // Prefix x = value of the top `level` qubits; block of the rest below.
        const std::size_t prefixes = std::size_t{1} << level;
        const std::size_t block = std::size_t{1} << (n - level);
        std::vector<double> angles(prefixes, 0.0);
        bool any = false;
        for (std::size_t x = 0; x < prefixes; ++x) {
            double p0 = 0.0, p1 = 0.0;
            for (std::size_t r = 0; r < block; ++r) {
                const double p = probabilities[x * block + r];
                (r < block / 2 ? p0 : p1) += p;
            }
            if (p0 + p1 > 0.0) angles[x] = 2.0 * std::atan2(std::sqrt(p1), std::sqrt(p0));
            any = any || angles[x] != 0.0;
        }
        if (!any) continue;
        std::vector<int> controls(qubits.end() - level, qubits.end());
        append_multiplexed_ry(c, controls, qubits[static_cast<std::size_t>(n - 1 - level)], angles);
    }
    return c;
}

}  // namespace qgbf
