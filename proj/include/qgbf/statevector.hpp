// statevector.hpp
// Dense statevector simulation, register layouts, amplitude loading and readout.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgbf/circuit.hpp"
#include "qgbf/grid.hpp"

namespace qgbf {

using Amplitude = std::complex<double>;

class Statevector {
public:
    explicit Statevector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 0 || num_qubits > 26)
            throw std::invalid_argument("Statevector: width must be in [0, 26]");
        amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
        amplitudes_[0] = 1.0;
    }

    /// Takes ownership of an amplitude array; its length must be a power of two
    /// and its norm one.
    static Statevector from_amplitudes(std::vector<Amplitude> amplitudes) {
        const auto len = amplitudes.size();
        if (len == 0 || (len & (len - 1)) != 0)
            throw std::invalid_argument("Statevector: length must be a power of two");
        Statevector sv(0);
        sv.num_qubits_ = std::countr_zero(len);
        sv.amplitudes_ = std::move(amplitudes);
        if (std::abs(sv.norm_squared() - 1.0) > 1e-10)
            throw std::invalid_argument("Statevector: amplitudes not normalized");
        return sv;
    }

    static Statevector basis_state(int num_qubits, std::uint64_t index) {
        Statevector sv(num_qubits);
        if (index >= sv.size()) throw std::out_of_range("Statevector: basis index out of range");
        sv.amplitudes_[0] = 0.0;
        sv.amplitudes_[index] = 1.0;
        return sv;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes_) s += std::norm(a);
        return s;
    }

    void apply(const Gate& g) {
        const auto check = [&](int q) {
            if (q < 0 || q >= num_qubits_) throw std::out_of_range("Statevector: gate operand outside register");
        };
        check(g.qubits[0]);
        if (g.arity() == 2) check(g.qubits[1]);

        const std::size_t n = amplitudes_.size();
        const std::size_t m0 = std::size_t{1} << g.qubits[0];
        switch (g.kind) {
            case GateKind::Hadamard: {
                const double s = 1.0 / std::sqrt(2.0);
                for_pairs(m0, [&](Amplitude& a, Amplitude& b) {
                    const Amplitude x = a, y = b;
                    a = s * (x + y);
                    b = s * (x - y);
                });
                break;
            }
            case GateKind::PauliX:
                for_pairs(m0, [](Amplitude& a, Amplitude& b) { std::swap(a, b); });
                break;
            case GateKind::PhaseRotation: {
                const Amplitude ph = std::polar(1.0, g.angle);
                for_pairs(m0, [&](Amplitude&, Amplitude& b) { b *= ph; });
                break;
            }
            case GateKind::RotZ: {
                const Amplitude lo = std::polar(1.0, -g.angle / 2), hi = std::polar(1.0, g.angle / 2);
                for_pairs(m0, [&](Amplitude& a, Amplitude& b) {
                    a *= lo;
                    b *= hi;
                });
                break;
            }
            case GateKind::RotY: {
                const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
                for_pairs(m0, [&](Amplitude& a, Amplitude& b) {
                    const Amplitude x = a, y = b;
                    a = c * x - s * y;
                    b = s * x + c * y;
                });
                break;
            }
            case GateKind::ControlledNot: {
                const std::size_t mt = std::size_t{1} << g.qubits[1];
                for (std::size_t i = 0; i < n; ++i)
                    if ((i & m0) && !(i & mt)) std::swap(amplitudes_[i], amplitudes_[i | mt]);
                break;
            }
            case GateKind::ControlledPhase: {
                const std::size_t both = m0 | (std::size_t{1} << g.qubits[1]);
                const Amplitude ph = std::polar(1.0, g.angle);
                for (std::size_t i = 0; i < n; ++i)
                    if ((i & both) == both) amplitudes_[i] *= ph;
                break;
            }
            case GateKind::Swap: {
                const std::size_t m1 = std::size_t{1} << g.qubits[1];
                for (std::size_t i = 0; i < n; ++i)
                    if ((i & m0) && !(i & m1)) std::swap(amplitudes_[i], amplitudes_[(i ^ m0) | m1]);
                break;
            }
        }
    }

    void apply(const Circuit& c) {
        if (c.num_qubits() != num_qubits_)
            throw std::invalid_argument("Statevector: circuit width " + std::to_string(c.num_qubits()) +
                                        " != statevector width " + std::to_string(num_qubits_));
        for (const auto& g : c.gates()) apply(g);
    }

private:
    template <class F>
    void for_pairs(std::size_t mask, F&& f) {
        for (std::size_t i = 0; i < amplitudes_.size(); ++i)
            if (!(i & mask)) f(amplitudes_[i], amplitudes_[i | mask]);
    }

    int num_qubits_ = 0;
    std::vector<Amplitude> amplitudes_;
};

inline Statevector apply(const Circuit& c, Statevector sv) {
    sv.apply(c);
    return sv;
}

// ---------------------------------------------------------------------------
// Register layout

enum class RegisterRole { State, Noise, Coin };

inline const char* role_name(RegisterRole r) {
    switch (r) {
        case RegisterRole::State: return "state";
        case RegisterRole::Noise: return "noise";
        case RegisterRole::Coin: return "coin";
    }
    return "?";
}

struct Register {
    std::string name;
    RegisterRole role;
    int dimension = 0;
    std::vector<int> qubits;  // qubits[0] least significant
    GridAxis axis;
};

/// Assignment of named subregisters to global qubit indices.
class RegisterLayout {
public:
    RegisterLayout() = default;
    RegisterLayout(int num_qubits, std::vector<Register> registers)
        : num_qubits_(num_qubits), registers_(std::move(registers)) {
        validate();
    }

    /// State registers for every dimension on the low qubits (dimension 0 first),
    /// then the matching noise registers, then `num_coins` single-qubit coins.
    static RegisterLayout for_diffusion(const std::vector<GridAxis>& state_axes,
                                        const std::vector<GridAxis>& noise_axes, int num_coins = 0) {
        std::vector<Register> regs;
        int next = 0;
        const auto take = [&](int width) {
            std::vector<int> q(static_cast<std::size_t>(width));
            std::iota(q.begin(), q.end(), next);
            next += width;
            return q;
        };
        for (std::size_t j = 0; j < state_axes.size(); ++j)
            regs.push_back({"state" + std::to_string(j), RegisterRole::State, static_cast<int>(j),
                            take(state_axes[j].num_qubits), state_axes[j]});
        for (std::size_t j = 0; j < noise_axes.size(); ++j)
            regs.push_back({"noise" + std::to_string(j), RegisterRole::Noise, static_cast<int>(j),
                            take(noise_axes[j].num_qubits), noise_axes[j]});
        for (int c = 0; c < num_coins; ++c)
            regs.push_back({"coin" + std::to_string(c), RegisterRole::Coin, c, take(1),
                            GridAxis::unsigned_axis(0.0, 1.0, 1)});
        return RegisterLayout(next, std::move(regs));
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<Register>& registers() const { return registers_; }

    const Register* find(RegisterRole role, int dimension) const {
        for (const auto& r : registers_)
            if (r.role == role && r.dimension == dimension) return &r;
        return nullptr;
    }

    const Register& get(RegisterRole role, int dimension) const {
        if (const auto* r = find(role, dimension)) return *r;
        throw std::invalid_argument(std::string("RegisterLayout: no ") + role_name(role) +
                                    " register for dimension " + std::to_string(dimension));
    }

    /// All qubits of one role, concatenated in ascending dimension order.
    std::vector<int> qubits(RegisterRole role) const {
        std::vector<const Register*> rs;
        for (const auto& r : registers_)
            if (r.role == role) rs.push_back(&r);
        std::sort(rs.begin(), rs.end(), [](auto* a, auto* b) { return a->dimension < b->dimension; });
        std::vector<int> q;
        for (auto* r : rs) q.insert(q.end(), r->qubits.begin(), r->qubits.end());
        return q;
    }

    std::vector<GridAxis> axes(RegisterRole role) const {
        std::vector<const Register*> rs;
        for (const auto& r : registers_)
            if (r.role == role) rs.push_back(&r);
        std::sort(rs.begin(), rs.end(), [](auto* a, auto* b) { return a->dimension < b->dimension; });
        std::vector<GridAxis> out;
        for (auto* r : rs) out.push_back(r->axis);
        return out;
    }

    int dimensions(RegisterRole role) const {
        int n = 0;
        for (const auto& r : registers_)
            if (r.role == role) ++n;
        return n;
    }

private:
    void validate() const {
        std::vector<int> owner(static_cast<std::size_t>(num_qubits_), -1);
        for (std::size_t k = 0; k < registers_.size(); ++k) {
            const auto& r = registers_[k];
            if (r.qubits.empty()) throw std::invalid_argument("RegisterLayout: register " + r.name + " is empty");
            if (r.role != RegisterRole::Coin && static_cast<int>(r.qubits.size()) != r.axis.num_qubits)
                throw std::invalid_argument("RegisterLayout: register " + r.name + " width " +
                                            std::to_string(r.qubits.size()) + " != axis width " +
                                            std::to_string(r.axis.num_qubits));
            for (int q : r.qubits) {
                if (q < 0 || q >= num_qubits_)
                    throw std::invalid_argument("RegisterLayout: qubit " + std::to_string(q) + " of " + r.name +
                                                " outside [0, " + std::to_string(num_qubits_) + ")");
                if (owner[static_cast<std::size_t>(q)] != -1)
                    throw std::invalid_argument("RegisterLayout: qubit " + std::to_string(q) +
                                                " assigned to both " +
                                                registers_[static_cast<std::size_t>(owner[q])].name +
                                                " and " + r.name);
                owner[static_cast<std::size_t>(q)] = static_cast<int>(k);
            }
        }
        if (std::find(owner.begin(), owner.end(), -1) != owner.end())
            throw std::invalid_argument("RegisterLayout: registers do not cover every qubit");
        for (const auto& r : registers_) {
            if (r.role != RegisterRole::Noise) continue;
            const auto* s = find(RegisterRole::State, r.dimension);
            if (s && s->qubits.size() != r.qubits.size())
                throw std::invalid_argument("RegisterLayout: noise and state registers of dimension " +
                                            std::to_string(r.dimension) + " differ in width");
        }
    }

    int num_qubits_ = 0;
    std::vector<Register> registers_;
};

// ---------------------------------------------------------------------------
// Bit scatter / gather between register values and global basis indices

inline std::uint64_t scatter_bits(std::uint64_t value, const std::vector<int>& qubits) {
    std::uint64_t out = 0;
    for (std::size_t b = 0; b < qubits.size(); ++b)
        if ((value >> b) & 1u) out |= std::uint64_t{1} << qubits[b];
    return out;
}

inline std::uint64_t gather_bits(std::uint64_t index, const std::vector<int>& qubits) {
    std::uint64_t out = 0;
    for (std::size_t b = 0; b < qubits.size(); ++b)
        if ((index >> qubits[b]) & 1u) out |= std::uint64_t{1} << b;
    return out;
}

namespace detail {

inline void check_density_against(const PointMassDensity& d, const RegisterLayout& layout, RegisterRole role) {
    const auto axes = layout.axes(role);
    if (axes.size() != d.dims())
        throw std::invalid_argument(std::string("load_product_state: ") + role_name(role) + " density has " +
                                    std::to_string(d.dims()) + " dimensions, layout has " +
                                    std::to_string(axes.size()));
    for (std::size_t j = 0; j < axes.size(); ++j)
        if (axes[j].num_qubits != d.axes()[j].num_qubits)
            throw std::invalid_argument(std::string("load_product_state: ") + role_name(role) +
                                        " register width mismatch in dimension " + std::to_string(j));
    double total = 0.0;
    for (double w : d.weights()) total += w;
    if (std::abs(total - 1.0) > kNormTolerance)
        throw std::invalid_argument("load_product_state: density not normalized");
}

}  // namespace detail

/// Amplitude sqrt(p_noise(m) * p_state(l)) on |m>|l>, all other qubits |0>.
/// Weights are indexed by register value (two's-complement for signed axes).
inline Statevector load_product_state(const RegisterLayout& layout, const PointMassDensity& state,
                                      const PointMassDensity* noise = nullptr) {
    detail::check_density_against(state, layout, RegisterRole::State);
    if (noise) detail::check_density_against(*noise, layout, RegisterRole::Noise);
    const auto sq = layout.qubits(RegisterRole::State);
    const auto nq = layout.qubits(RegisterRole::Noise);

    std::vector<Amplitude> amps(std::size_t{1} << layout.num_qubits(), Amplitude{0.0, 0.0});
    for (std::uint64_t l = 0; l < state.size(); ++l) {
        if (state[l] == 0.0) continue;
        const auto base = scatter_bits(l, sq);
        if (!noise) {
            amps[base] = std::sqrt(state[l]);
            continue;
        }
        for (std::uint64_t m = 0; m < noise->size(); ++m) {
            if ((*noise)[m] == 0.0) continue;
            amps[base | scatter_bits(m, nq)] = std::sqrt(state[l] * (*noise)[m]);
        }
    }
    return Statevector::from_amplitudes(std::move(amps));
}

inline Statevector load_product_state(const RegisterLayout& layout, const PointMassDensity& state,
                                      const PointMassDensity& noise) {
    return load_product_state(layout, state, &noise);
}

/// Outcome probabilities of `qubits` (qubits[0] least significant), all others traced out.
inline std::vector<double> marginal_probabilities(const Statevector& sv, const std::vector<int>& qubits) {
    check_register(qubits, "marginal_probabilities");
    for (int q : qubits)
        if (q >= sv.num_qubits()) throw std::out_of_range("marginal_probabilities: qubit outside statevector");
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    for (std::uint64_t i = 0; i < sv.size(); ++i) p[gather_bits(i, qubits)] += std::norm(sv[i]);
    return p;
}

inline std::vector<double> marginal_probabilities(const Statevector& sv, const Register& reg) {
    return marginal_probabilities(sv, reg.qubits);
}

// ---------------------------------------------------------------------------
// Sampling

struct ShotHistogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total_shots = 0;
    std::uint64_t seed = 0;

    std::vector<double> frequencies() const {
        std::vector<double> f(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i)
            f[i] = static_cast<double>(counts[i]) / static_cast<double>(total_shots);
        return f;
    }
};

/// Draws `shots` outcomes from a probability vector by inverse CDF on a
/// seeded mt19937_64 stream (53-bit uniforms, so the stream is portable).
inline ShotHistogram sample_distribution(const std::vector<double>& probabilities, std::uint64_t shots,
                                         std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("sample: shots must be >= 1");
    if (probabilities.empty()) throw std::invalid_argument("sample: empty distribution");
    std::vector<double> cdf(probabilities.size());
    std::partial_sum(probabilities.begin(), probabilities.end(), cdf.begin());
    const double total = cdf.back();
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i)
        if (probabilities[i] > 0.0) last_nonzero = i;

    ShotHistogram h{std::vector<std::uint64_t>(probabilities.size(), 0), shots, seed};
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
        auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        ++h.counts[std::min(idx, last_nonzero)];
    }
    return h;
}

inline ShotHistogram sample(const Statevector& sv, const std::vector<int>& qubits, std::uint64_t shots,
                            std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("sample: shots must be >= 1");
    return sample_distribution(marginal_probabilities(sv, qubits), shots, seed);
}

/// Writes `outcome_index,signed_value,count,frequency,exact_probability`.
/// signed_value is the register value read through `axis` (two's-complement
/// decoded on signed axes); without an axis it repeats the outcome index.
inline void write_histogram_csv(std::ostream& os, const ShotHistogram& h, const std::vector<double>& exact,
                                const GridAxis* axis = nullptr) {
    if (exact.size() != h.counts.size()) throw std::invalid_argument("write_histogram_csv: length mismatch");
    os << "outcome_index,signed_value,count,frequency,exact_probability\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const std::int64_t value = (axis && axis->is_signed) ? signed_decode(*axis, i) : static_cast<std::int64_t>(i);
        os << i << ',' << value << ',' << h.counts[i] << ','
           << format_real(static_cast<double>(h.counts[i]) / static_cast<double>(h.total_shots)) << ','
           << format_real(exact[i]) << '\n';
    }
}

}  // namespace qgbf
