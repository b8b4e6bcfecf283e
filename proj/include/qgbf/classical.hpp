// classical.hpp
// Classical grid-based filter pieces: circular convolution (direct and FFT),
// advection with multilinear spreading, and the Bayes measurement update.
//
// The convolution is circular on purpose. The quantum adder is modular, so the
// oracle that checks it must wrap the same way; see wraparound_mass() in
// diffusion.hpp for how much probability actually wrapped.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgbf/grid.hpp"

namespace qgbf {

inline void require_shared_axes(const PointMassDensity& a, const PointMassDensity& b, const char* what) {
    if (a.dims() != b.dims())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dims()) +
                                    " vs " + std::to_string(b.dims()) + ")");
    for (std::size_t j = 0; j < a.dims(); ++j)
        if (!a.axes()[j].compatible_with(b.axes()[j]))
            throw std::invalid_argument(std::string(what) + ": axis " + std::to_string(j) + " mismatch: " +
                                        a.axes()[j].describe() + " vs " + b.axes()[j].describe());
}

/// c[i] = sum_m a[(i - m) mod N] b[m], per dimension on register indices.
/// The result lives on a's axes.
inline PointMassDensity convolve_circular(const PointMassDensity& a, const PointMassDensity& b) {
    require_shared_axes(a, b, "convolve_circular");
    std::vector<double> c(a.size(), 0.0);
    for (std::uint64_t fa = 0; fa < a.size(); ++fa) {
        if (a[fa] == 0.0) continue;
        for (std::uint64_t fb = 0; fb < b.size(); ++fb) {
            if (b[fb] == 0.0) continue;
            std::uint64_t flat = 0;
            int shift = 0;
            std::uint64_t ra = fa, rb = fb;
            for (const auto& axis : a.axes()) {
                const auto mask = axis.size() - 1;
                flat |= (((ra & mask) + (rb & mask)) & mask) << shift;
                shift += axis.num_qubits;
                ra >>= axis.num_qubits;
                rb >>= axis.num_qubits;
            }
            c[flat] += a[fa] * b[fb];
        }
    }
    return PointMassDensity::normalized(a.axes(), std::move(c));
}

namespace detail {

// In-place radix-2 FFT over `count` elements spaced by `stride`, starting at `offset`.
inline void fft_line(std::vector<std::complex<double>>& data, std::size_t offset, std::size_t stride,
                     std::size_t count, bool inverse) {
    auto at = [&](std::size_t i) -> std::complex<double>& { return data[offset + i * stride]; };
    for (std::size_t i = 1, j = 0; i < count; ++i) {
        std::size_t bit = count >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(at(i), at(j));
    }
    for (std::size_t len = 2; len <= count; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < count; i += len) {
            std::complex<double> w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = at(i + k);
                const auto v = at(i + k + len / 2) * w;
                at(i + k) = u + v;
                at(i + k + len / 2) = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (std::size_t i = 0; i < count; ++i) at(i) /= static_cast<double>(count);
}

inline void fft_grid(std::vector<std::complex<double>>& data, const std::vector<GridAxis>& axes, bool inverse) {
    std::size_t stride = 1;
    for (const auto& axis : axes) {
        const std::size_t n = axis.size();
        for (std::size_t base = 0; base < data.size(); ++base) {
            // Start of every line along this axis: index digit for this axis is 0.
            if ((base / stride) % n != 0) continue;
            fft_line(data, base, stride, n, inverse);
        }
        stride *= n;
    }
}

}  // namespace detail

/// Same result as convolve_circular via a separable radix-2 FFT.
inline PointMassDensity convolve_circular_fft(const PointMassDensity& a, const PointMassDensity& b) {
    require_shared_axes(a, b, "convolve_circular_fft");
    std::vector<std::complex<double>> fa(a.weights().begin(), a.weights().end());
    std::vector<std::complex<double>> fb(b.weights().begin(), b.weights().end());
    detail::fft_grid(fa, a.axes(), false);
    detail::fft_grid(fb, a.axes(), false);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    detail::fft_grid(fa, a.axes(), true);
    std::vector<double> c(fa.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::max(0.0, fa[i].real());
    return PointMassDensity::normalized(a.axes(), std::move(c));
}

// ---------------------------------------------------------------------------
// Models

using StateVec = std::vector<double>;

struct DynamicsModel {
    /// x_{k+1} = f(x_k, u_k) + w_k
    std::function<StateVec(const StateVec& x, const StateVec& u)> transition;
    PointMassDensity process_noise;  // signed axes, same geometry as the state grid

    static DynamicsModel identity(PointMassDensity noise) {
        return {[](const StateVec& x, const StateVec&) { return x; }, std::move(noise)};
    }

    /// f(x) = scale * x + offset, applied per component.
    static DynamicsModel affine(StateVec scale, StateVec offset, PointMassDensity noise) {
        return {[scale = std::move(scale), offset = std::move(offset)](const StateVec& x, const StateVec& u) {
                    StateVec y(x.size());
                    for (std::size_t j = 0; j < x.size(); ++j)
                        y[j] = scale[j] * x[j] + offset[j] + (j < u.size() ? u[j] : 0.0);
                    return y;
                },
                std::move(noise)};
    }
};

struct MeasurementModel {
    /// p(z | x); nonnegative and finite on the grid.
    std::function<double(const StateVec& z, const StateVec& x)> likelihood;

    /// z = x + v, v ~ N(0, diag(stddev^2)).
    static MeasurementModel gaussian(StateVec stddev) {
        return {[s = std::move(stddev)](const StateVec& z, const StateVec& x) {
            double e = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double d = (z[j] - x[j]) / s[j];
                e += d * d;
            }
            return std::exp(-0.5 * e);
        }};
    }
};

// ---------------------------------------------------------------------------
// Advection

/// Transports every grid point through the dynamics and deposits its mass on
/// the 2^d enclosing target cells with multilinear weights. Mass landing
/// outside the target grid is dropped, reported, and the rest renormalized.
inline PointMassDensity advect(const PointMassDensity& posterior, const DynamicsModel& model, const StateVec& control,
                               const std::vector<GridAxis>& target_axes, Warnings* warnings = nullptr) {
    if (target_axes.size() != posterior.dims())
        throw std::invalid_argument("advect: target grid dimension mismatch");
    for (const auto& a : target_axes)
        if (a.is_signed) throw std::invalid_argument("advect: target axes must be unsigned state axes");

    const std::size_t d = posterior.dims();
    std::vector<double> out(PointMassDensity::grid_size(target_axes), 0.0);
    double lost = 0.0;
    std::vector<double> frac(d);
    std::vector<std::int64_t> base(d);

    for (std::uint64_t f = 0; f < posterior.size(); ++f) {
        const double w = posterior[f];
        if (w == 0.0) continue;
        const StateVec y = model.transition(posterior.coordinates(f), control);
        for (std::size_t j = 0; j < d; ++j) {
            const double t = (y[j] - target_axes[j].xi_min) / target_axes[j].delta;
            double fl = std::floor(t);
            double fr = t - fl;
            if (fr < 1e-12) fr = 0.0;
            if (fr > 1.0 - 1e-12) {
                fr = 0.0;
                fl += 1.0;
            }
            base[j] = static_cast<std::int64_t>(fl);
            frac[j] = fr;
        }
        for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << d); ++corner) {
            double cw = w;
            std::uint64_t flat = 0;
            int shift = 0;
            bool inside = true;
            for (std::size_t j = 0; j < d; ++j) {
                const bool up = (corner >> j) & 1u;
                cw *= up ? frac[j] : 1.0 - frac[j];
                const std::int64_t idx = base[j] + (up ? 1 : 0);
                if (idx < 0 || idx >= static_cast<std::int64_t>(target_axes[j].size())) inside = false;
                else flat |= static_cast<std::uint64_t>(idx) << shift;
                shift += target_axes[j].num_qubits;
            }
            if (cw == 0.0) continue;
            if (inside) out[flat] += cw;
            else lost += cw;
        }
    }
    double kept = 0.0;
    for (double v : out) kept += v;
    if (!(kept > 0.0)) throw std::runtime_error("advect: all transported mass left the target grid");
    if (lost > kNormTolerance && warnings) {
        std::ostringstream os;
        os << "advect: " << lost << " of the probability mass left the target grid; renormalized";
        warnings->push_back(os.str());
    }
    return PointMassDensity::normalized(target_axes, std::move(out));
}

// ---------------------------------------------------------------------------
// Measurement update

struct MeasurementUpdate {
    PointMassDensity posterior;
    double log_evidence = 0.0;  // log sum_i prior_i p(z | x_i)
};

inline MeasurementUpdate measurement_update(const PointMassDensity& prior, const MeasurementModel& model,
                                            const StateVec& z) {
    std::vector<double> w(prior.size(), 0.0);
    double total = 0.0;
    for (std::uint64_t f = 0; f < prior.size(); ++f) {
        if (prior[f] == 0.0) continue;
        const double l = model.likelihood(z, prior.coordinates(f));
        if (!(l >= 0.0) || !std::isfinite(l))
            throw std::invalid_argument("measurement_update: likelihood negative or non-finite");
        w[f] = prior[f] * l;
        total += w[f];
    }
    if (!(total > 0.0))
        throw std::runtime_error("measurement_update: measurement has zero likelihood under the prior");
    return {PointMassDensity::normalized(prior.axes(), std::move(w)), std::log(total)};
}

// ---------------------------------------------------------------------------
// Kernels

/// Distribution of the sum of `repeats` independent fair +-1 steps per
/// dimension, on signed axes, wrapped modulo the register size.
inline PointMassDensity binomial_walk_kernel(const std::vector<GridAxis>& noise_axes, int repeats) {
    if (repeats < 1) throw std::invalid_argument("binomial_walk_kernel: repeats must be >= 1");
    std::vector<std::vector<double>> per_axis;
    for (const auto& axis : noise_axes) {
        std::vector<double> k(axis.size(), 0.0);
        double binom = 1.0;  // C(r, up)
        const double scale = std::ldexp(1.0, -repeats);
        for (int up = 0; up <= repeats; ++up) {
            const std::int64_t offset = 2 * up - repeats;
            const auto n = static_cast<std::int64_t>(axis.size());
            k[static_cast<std::size_t>(((offset % n) + n) % n)] += binom * scale;
            binom = binom * (repeats - up) / (up + 1);
        }
        per_axis.push_back(std::move(k));
    }
    std::vector<double> w(PointMassDensity::grid_size(noise_axes), 1.0);
    for (std::uint64_t f = 0; f < w.size(); ++f) {
        std::uint64_t rest = f;
        for (std::size_t j = 0; j < noise_axes.size(); ++j) {
            w[f] *= per_axis[j][rest & (noise_axes[j].size() - 1)];
            rest >>= noise_axes[j].num_qubits;
        }
    }
    return PointMassDensity::normalized(noise_axes, std::move(w));
}

}  // namespace qgbf
