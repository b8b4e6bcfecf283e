// circuit.hpp
// Gate-level circuit representation.

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgbf {

enum class GateKind {
    Hadamard,
    PhaseRotation,  // diag(1, e^{i angle})
    RotY,
    RotZ,
    PauliX,
    ControlledNot,    // qubits {control, target}
    ControlledPhase,  // qubits {control, target}, symmetric
    Swap,
};

inline std::string_view gate_name(GateKind k) {
    switch (k) {
        case GateKind::Hadamard: return "H";
        case GateKind::PhaseRotation: return "P";
        case GateKind::RotY: return "RY";
        case GateKind::RotZ: return "RZ";
        case GateKind::PauliX: return "X";
        case GateKind::ControlledNot: return "CNOT";
        case GateKind::ControlledPhase: return "CP";
        case GateKind::Swap: return "SWAP";
    }
    return "?";
}

inline constexpr bool is_two_qubit(GateKind k) {
    return k == GateKind::ControlledNot || k == GateKind::ControlledPhase || k == GateKind::Swap;
}

inline constexpr bool has_angle(GateKind k) {
    return k == GateKind::PhaseRotation || k == GateKind::RotY || k == GateKind::RotZ ||
           k == GateKind::ControlledPhase;
}

/// Elementary set used for resource accounting: one-qubit gates and CNOT.
inline constexpr bool is_elementary(GateKind k) {
    return k != GateKind::ControlledPhase && k != GateKind::Swap;
}

/// Maps an angle into (-2pi, 2pi].
inline double canonical_angle(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(angle, 2.0 * two_pi);  // (-4pi, 4pi)
    if (a > two_pi) a -= 2.0 * two_pi;
    if (a <= -two_pi) a += 2.0 * two_pi;
    return a;
}

struct Gate {
    GateKind kind;
    std::array<int, 2> qubits{-1, -1};
    double angle = 0.0;

    int arity() const { return is_two_qubit(kind) ? 2 : 1; }

    static Gate h(int q) { return {GateKind::Hadamard, {q, -1}, 0.0}; }
    static Gate x(int q) { return {GateKind::PauliX, {q, -1}, 0.0}; }
    static Gate phase(int q, double a) { return {GateKind::PhaseRotation, {q, -1}, canonical_angle(a)}; }
    static Gate ry(int q, double a) { return {GateKind::RotY, {q, -1}, canonical_angle(a)}; }
    static Gate rz(int q, double a) { return {GateKind::RotZ, {q, -1}, canonical_angle(a)}; }
    static Gate cnot(int c, int t) { return {GateKind::ControlledNot, {c, t}, 0.0}; }
    static Gate cphase(int c, int t, double a) {
        return {GateKind::ControlledPhase, {c, t}, canonical_angle(a)};
    }
    static Gate swap(int a, int b) { return {GateKind::Swap, {a, b}, 0.0}; }

    Gate adjoint() const {
        Gate g = *this;
        if (has_angle(kind)) g.angle = canonical_angle(-angle);
        return g;
    }
};

inline bool operator==(const Gate& a, const Gate& b) {
    return a.kind == b.kind && a.qubits == b.qubits && a.angle == b.angle;
}

/// Ordered gate list on a fixed number of qubits. Operands are checked on append.
class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 0) throw std::invalid_argument("Circuit: negative width");
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    Circuit& append(const Gate& g) {
        for (int i = 0; i < g.arity(); ++i)
            if (g.qubits[i] < 0 || g.qubits[i] >= num_qubits_)
                throw std::out_of_range("Circuit: operand " + std::to_string(g.qubits[i]) + " of " +
                                        std::string(gate_name(g.kind)) + " outside width " +
                                        std::to_string(num_qubits_));
        if (g.arity() == 2 && g.qubits[0] == g.qubits[1])
            throw std::invalid_argument("Circuit: " + std::string(gate_name(g.kind)) +
                                        " operands must be distinct");
        gates_.push_back(g);
        return *this;
    }

    Circuit& append(const Circuit& other) {
        if (other.num_qubits_ > num_qubits_)
            throw std::invalid_argument("Circuit: appended circuit is wider than target");
        for (const auto& g : other.gates_) append(g);
        return *this;
    }

    /// Reversed order, each gate inverted.
    Circuit adjoint() const {
        Circuit c(num_qubits_);
        c.gates_.reserve(gates_.size());
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) c.gates_.push_back(it->adjoint());
        return c;
    }

private:
    int num_qubits_ = 0;
    std::vector<Gate> gates_;
};

inline Circuit concat(const Circuit& a, const Circuit& b) {
    Circuit c(std::max(a.num_qubits(), b.num_qubits()));
    c.append(a);
    c.append(b);
    return c;
}

/// Drops rotations with |angle| < epsilon (approximate QFT). epsilon <= 0 keeps everything.
inline Circuit prune_small_rotations(const Circuit& circuit, double epsilon) {
    Circuit out(circuit.num_qubits());
    for (const auto& g : circuit.gates()) {
        if (epsilon > 0.0 && has_angle(g.kind) && std::abs(g.angle) < epsilon) continue;
        out.append(g);
    }
    return out;
}

/// One gate per line: `GATE q0 [q1] [angle]`, angle printed with 17 significant digits.
inline void write_circuit_text(std::ostream& os, const Circuit& circuit) {
    char buf[48];
    for (const auto& g : circuit.gates()) {
        os << gate_name(g.kind) << ' ' << g.qubits[0];
        if (g.arity() == 2) os << ' ' << g.qubits[1];
        if (has_angle(g.kind)) {
            std::snprintf(buf, sizeof buf, "%.17g", g.angle);
            os << ' ' << buf;
        }
        os << '\n';
    }
}

inline std::string circuit_text(const Circuit& circuit) {
    std::ostringstream os;
    write_circuit_text(os, circuit);
    return os.str();
}

// ---------------------------------------------------------------------------
// Standard constructions

inline void check_register(const std::vector<int>& qubits, std::string_view what) {
    if (qubits.empty()) throw std::invalid_argument(std::string(what) + ": empty register");
    auto sorted = qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument(std::string(what) + ": duplicate qubit indices");
    if (sorted.front() < 0) throw std::invalid_argument(std::string(what) + ": negative qubit index");
}

inline int required_width(const std::vector<int>& qubits) {
    return qubits.empty() ? 0 : *std::max_element(qubits.begin(), qubits.end()) + 1;
}

/// QFT on `qubits` (qubits[0] least significant): |k> -> sum_j e^{2 pi i jk/2^n} |j> / sqrt(2^n).
/// With `with_swaps == false` the output register is bit-reversed.
inline Circuit qft(const std::vector<int>& qubits, bool with_swaps = true, int width = -1) {
    check_register(qubits, "qft");
    const int n = static_cast<int>(qubits.size());
    Circuit c(std::max(width, required_width(qubits)));
    for (int i = n - 1; i >= 0; --i) {
        c.append(Gate::h(qubits[i]));
        for (int m = i - 1; m >= 0; --m)
            c.append(Gate::cphase(qubits[m], qubits[i], std::numbers::pi / std::ldexp(1.0, i - m)));
    }
    if (with_swaps)
        for (int i = 0; i < n / 2; ++i) c.append(Gate::swap(qubits[i], qubits[n - 1 - i]));
    return c;
}

inline Circuit inverse_qft(const std::vector<int>& qubits, bool with_swaps = true, int width = -1) {
    return qft(qubits, with_swaps, width).adjoint();
}

/// Multi-controlled X built from H, CNOT, CP and phase gates without ancillas.
/// One control: CNOT. Two: the standard 6-CNOT Toffoli. More: H, then a
/// Gray-code sequence of 2^k - 1 controlled phases of +-pi/2^(k-1) from
/// running parities of the controls, then H.
inline void append_mcx(Circuit& c, const std::vector<int>& controls, int target) {
    auto all = controls;
    all.push_back(target);
    check_register(all, "mcx");
    const int k = static_cast<int>(controls.size());
    constexpr double pi = std::numbers::pi;
    if (k == 1) {
        c.append(Gate::cnot(controls[0], target));
        return;
    }
    if (k == 2) {
        const int a = controls[0], b = controls[1], t = target;
        c.append(Gate::h(t));
        c.append(Gate::cnot(b, t));
        c.append(Gate::phase(t, -pi / 4));
        c.append(Gate::cnot(a, t));
        c.append(Gate::phase(t, pi / 4));
        c.append(Gate::cnot(b, t));
        c.append(Gate::phase(t, -pi / 4));
        c.append(Gate::cnot(a, t));
        c.append(Gate::phase(b, pi / 4));
        c.append(Gate::phase(t, pi / 4));
        c.append(Gate::h(t));
        c.append(Gate::cnot(a, b));
        c.append(Gate::phase(a, pi / 4));
        c.append(Gate::phase(b, -pi / 4));
        c.append(Gate::cnot(a, b));
        return;
    }
    // t * prod(x) = 2^{1-k} sum_{S != {}} (-1)^{|S|-1} t * parity_S(x)
    const double lam = pi / std::ldexp(1.0, k - 1);
    c.append(Gate::h(target));
    unsigned prev = 0;
    for (unsigned i = 1; i < (1u << k); ++i) {
        const unsigned gray = i ^ (i >> 1);
        const unsigned changed = gray ^ prev;
        int lead = 31 - __builtin_clz(gray);
        int flipped = __builtin_ctz(changed);
        if (flipped == lead) {
            // New leading control: fold in the other members, whose qubits are clean.
            for (int b = 0; b < lead; ++b)
                if (gray & (1u << b)) c.append(Gate::cnot(controls[b], controls[lead]));
        } else {
            c.append(Gate::cnot(controls[flipped], controls[lead]));
        }
        const bool odd = __builtin_popcount(gray) % 2 == 1;
        c.append(Gate::cphase(controls[lead], target, odd ? lam : -lam));
        prev = gray;
    }
    c.append(Gate::h(target));
}

}  // namespace qgbf
