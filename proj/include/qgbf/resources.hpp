// resources.hpp
// Decomposition into elementary gates and gate-count / depth accounting.

#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgbf/circuit.hpp"

namespace qgbf {

/// Rewrites every gate into {H, X, P, RY, RZ, CNOT}.
///   CP(theta) -> RZ(theta/2)_c RZ(theta/2)_t CNOT RZ(-theta/2)_t CNOT   (global phase e^{i theta/4})
///   SWAP      -> 3 CNOT
inline Circuit decompose(const Circuit& circuit) {
    Circuit out(circuit.num_qubits());
    for (const auto& g : circuit.gates()) {
        switch (g.kind) {
            case GateKind::ControlledPhase: {
                const int c = g.qubits[0], t = g.qubits[1];
                out.append(Gate::rz(c, g.angle / 2));
                out.append(Gate::rz(t, g.angle / 2));
                out.append(Gate::cnot(c, t));
                out.append(Gate::rz(t, -g.angle / 2));
                out.append(Gate::cnot(c, t));
                break;
            }
            case GateKind::Swap: {
                const int a = g.qubits[0], b = g.qubits[1];
                out.append(Gate::cnot(a, b));
                out.append(Gate::cnot(b, a));
                out.append(Gate::cnot(a, b));
                break;
            }
            default:
                out.append(g);
        }
    }
    return out;
}

struct ResourceReport {
    std::size_t one_qubit_gates = 0;
    std::size_t two_qubit_gates = 0;
    std::size_t depth = 0;

    std::size_t total_gates() const { return one_qubit_gates + two_qubit_gates; }
};

inline bool operator==(const ResourceReport& a, const ResourceReport& b) {
    return a.one_qubit_gates == b.one_qubit_gates && a.two_qubit_gates == b.two_qubit_gates &&
           a.depth == b.depth;
}

/// Counts by arity and ASAP depth. Requires an elementary circuit.
inline ResourceReport resource_report(const Circuit& circuit) {
    ResourceReport r;
    std::vector<std::size_t> busy(static_cast<std::size_t>(circuit.num_qubits()), 0);
    for (const auto& g : circuit.gates()) {
        if (!is_elementary(g.kind))
            throw std::logic_error("resource_report: non-elementary gate " +
                                   std::string(gate_name(g.kind)) + "; decompose first");
        if (g.arity() == 2) {
            ++r.two_qubit_gates;
            auto& a = busy[static_cast<std::size_t>(g.qubits[0])];
            auto& b = busy[static_cast<std::size_t>(g.qubits[1])];
            a = b = std::max(a, b) + 1;
            r.depth = std::max(r.depth, a);
        } else {
            ++r.one_qubit_gates;
            auto& a = busy[static_cast<std::size_t>(g.qubits[0])];
            r.depth = std::max(r.depth, ++a);
        }
    }
    return r;
}

}  // namespace qgbf
