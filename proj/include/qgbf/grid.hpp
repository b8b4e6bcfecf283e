// grid.hpp
// Rectangular grids, point-mass densities and the index maps between
// continuous coordinates and register indices.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgbf {

using Warnings = std::vector<std::string>;

inline constexpr double kNormTolerance = 1e-12;

/// One dimension of a uniform grid with 2^num_qubits cells.
///
/// Unsigned axes map cell i to xi_min + i * delta. Signed axes are centred on
/// zero: the register stores the two's-complement index of s, the cell
/// coordinate is s * delta, and xi_min is the lowest grid point
/// -2^(n-1) * delta.
struct GridAxis {
    double xi_min = 0.0;
    double delta = 1.0;
    int num_qubits = 1;
    bool is_signed = false;

    static GridAxis unsigned_axis(double xi_min, double delta, int num_qubits) {
        GridAxis a{xi_min, delta, num_qubits, false};
        a.validate();
        return a;
    }

    static GridAxis signed_axis(double delta, int num_qubits) {
        GridAxis a{-std::ldexp(delta, num_qubits - 1), delta, num_qubits, true};
        a.validate();
        return a;
    }

    void validate() const {
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw std::invalid_argument("GridAxis: delta must be positive and finite");
        if (num_qubits < 1 || num_qubits > 30)
            throw std::invalid_argument("GridAxis: num_qubits must be in [1, 30]");
        if (!std::isfinite(xi_min))
            throw std::invalid_argument("GridAxis: xi_min must be finite");
    }

    std::uint64_t size() const { return std::uint64_t{1} << num_qubits; }

    std::int64_t min_signed() const { return -(std::int64_t{1} << (num_qubits - 1)); }
    std::int64_t max_signed() const { return (std::int64_t{1} << (num_qubits - 1)) - 1; }

    // Same cell geometry and register width.
    bool compatible_with(const GridAxis& other) const {
        return num_qubits == other.num_qubits && delta == other.delta;
    }

    std::string describe() const {
        std::ostringstream os;
        os << (is_signed ? "signed" : "unsigned") << " axis(xi_min=" << xi_min
           << ", delta=" << delta << ", n=" << num_qubits << ")";
        return os.str();
    }
};

inline bool operator==(const GridAxis& a, const GridAxis& b) {
    return a.xi_min == b.xi_min && a.delta == b.delta && a.num_qubits == b.num_qubits &&
           a.is_signed == b.is_signed;
}

// ---------------------------------------------------------------------------
// Index maps

inline std::uint64_t signed_encode(const GridAxis& axis, std::int64_t signed_index) {
    if (!axis.is_signed)
        throw std::invalid_argument("signed_encode: " + axis.describe() + " is not signed");
    if (signed_index < axis.min_signed() || signed_index > axis.max_signed())
        throw std::out_of_range("signed_encode: index " + std::to_string(signed_index) +
                                " outside [" + std::to_string(axis.min_signed()) + ", " +
                                std::to_string(axis.max_signed()) + "] of " + axis.describe());
    const auto modulus = static_cast<std::int64_t>(axis.size());
    return static_cast<std::uint64_t>(((signed_index % modulus) + modulus) % modulus);
}

inline std::int64_t signed_decode(const GridAxis& axis, std::uint64_t unsigned_index) {
    if (!axis.is_signed)
        throw std::invalid_argument("signed_decode: " + axis.describe() + " is not signed");
    if (unsigned_index >= axis.size())
        throw std::out_of_range("signed_decode: index " + std::to_string(unsigned_index) +
                                " outside register of " + axis.describe());
    const auto half = axis.size() >> 1;
    return unsigned_index < half
               ? static_cast<std::int64_t>(unsigned_index)
               : static_cast<std::int64_t>(unsigned_index) - static_cast<std::int64_t>(axis.size());
}

/// Affine map from an unsigned-axis coordinate to its cell index. Rounds half up;
/// anything farther than delta/2 from the grid is rejected, never clamped.
inline std::uint64_t index_of(const GridAxis& axis, double coordinate) {
    if (axis.is_signed)
        throw std::invalid_argument("index_of: " + axis.describe() + " is signed; use signed_index_of");
    const double t = (coordinate - axis.xi_min) / axis.delta;
    const double r = std::floor(t + 0.5);
    const double hi = static_cast<double>(axis.size() - 1);
    if (!std::isfinite(t) || r < 0.0 || r > hi) {
        std::ostringstream os;
        os << "index_of: coordinate " << coordinate << " outside " << axis.describe()
           << " (valid range [" << axis.xi_min - axis.delta / 2 << ", "
           << axis.xi_min + (hi + 0.5) * axis.delta << "))";
        throw std::out_of_range(os.str());
    }
    return static_cast<std::uint64_t>(r);
}

/// Signed-axis counterpart of index_of: nearest signed index of a coordinate.
inline std::int64_t signed_index_of(const GridAxis& axis, double coordinate) {
    if (!axis.is_signed)
        throw std::invalid_argument("signed_index_of: " + axis.describe() + " is not signed");
    const double r = std::floor(coordinate / axis.delta + 0.5);
    if (!std::isfinite(r) || r < static_cast<double>(axis.min_signed()) ||
        r > static_cast<double>(axis.max_signed())) {
        std::ostringstream os;
        os << "signed_index_of: coordinate " << coordinate << " outside " << axis.describe();
        throw std::out_of_range(os.str());
    }
    return static_cast<std::int64_t>(r);
}

/// Register index of a coordinate on either kind of axis.
inline std::uint64_t register_index_of(const GridAxis& axis, double coordinate) {
    return axis.is_signed ? signed_encode(axis, signed_index_of(axis, coordinate))
                          : index_of(axis, coordinate);
}

/// Grid coordinate of a register index.
inline double coordinate(const GridAxis& axis, std::uint64_t register_index) {
    if (register_index >= axis.size())
        throw std::out_of_range("coordinate: index " + std::to_string(register_index) +
                                " outside " + axis.describe());
    if (axis.is_signed)
        return static_cast<double>(signed_decode(axis, register_index)) * axis.delta;
    return axis.xi_min + static_cast<double>(register_index) * axis.delta;
}

// ---------------------------------------------------------------------------
// PointMassDensity

/// Nonnegative weights on a rectangular grid, summing to one. The flat index is
/// little-endian in dimension order: dimension 0 varies fastest.
class PointMassDensity {
public:
    PointMassDensity() = default;

    PointMassDensity(std::vector<GridAxis> axes, std::vector<double> weights)
        : axes_(std::move(axes)), weights_(std::move(weights)) {
        if (axes_.empty()) throw std::invalid_argument("PointMassDensity: no axes");
        for (const auto& a : axes_) a.validate();
        if (weights_.size() != grid_size(axes_))
            throw std::invalid_argument("PointMassDensity: weight count " +
                                        std::to_string(weights_.size()) + " != grid size " +
                                        std::to_string(grid_size(axes_)));
        double total = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw std::invalid_argument("PointMassDensity: negative or non-finite weight");
            total += w;
        }
        if (std::abs(total - 1.0) > kNormTolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "PointMassDensity: weights sum to " << total << ", expected 1";
            throw std::invalid_argument(os.str());
        }
    }

    /// Rescales arbitrary nonnegative weights to unit mass.
    static PointMassDensity normalized(std::vector<GridAxis> axes, std::vector<double> weights) {
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (!(total > 0.0) || !std::isfinite(total))
            throw std::invalid_argument("PointMassDensity::normalized: total weight must be positive");
        for (double& w : weights) w /= total;
        return PointMassDensity(std::move(axes), std::move(weights));
    }

    static std::uint64_t grid_size(const std::vector<GridAxis>& axes) {
        std::uint64_t n = 1;
        for (const auto& a : axes) n *= a.size();
        return n;
    }

    const std::vector<GridAxis>& axes() const { return axes_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t dims() const { return axes_.size(); }
    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t flat) const { return weights_[flat]; }

    int total_qubits() const {
        int n = 0;
        for (const auto& a : axes_) n += a.num_qubits;
        return n;
    }

    std::uint64_t flat_index(const std::vector<std::uint64_t>& register_indices) const {
        if (register_indices.size() != axes_.size())
            throw std::invalid_argument("flat_index: dimension mismatch");
        std::uint64_t flat = 0;
        int shift = 0;
        for (std::size_t j = 0; j < axes_.size(); ++j) {
            if (register_indices[j] >= axes_[j].size())
                throw std::out_of_range("flat_index: index outside " + axes_[j].describe());
            flat |= register_indices[j] << shift;
            shift += axes_[j].num_qubits;
        }
        return flat;
    }

    std::vector<std::uint64_t> register_indices(std::uint64_t flat) const {
        std::vector<std::uint64_t> idx(axes_.size());
        for (std::size_t j = 0; j < axes_.size(); ++j) {
            idx[j] = flat & (axes_[j].size() - 1);
            flat >>= axes_[j].num_qubits;
        }
        return idx;
    }

    std::vector<double> coordinates(std::uint64_t flat) const {
        const auto idx = register_indices(flat);
        std::vector<double> x(axes_.size());
        for (std::size_t j = 0; j < axes_.size(); ++j) x[j] = coordinate(axes_[j], idx[j]);
        return x;
    }

    double mean(std::size_t dim) const {
        double m = 0.0;
        for (std::uint64_t f = 0; f < weights_.size(); ++f)
            m += weights_[f] * coordinate(axes_[dim], register_indices(f)[dim]);
        return m;
    }

    double variance(std::size_t dim) const {
        const double m = mean(dim);
        double v = 0.0;
        for (std::uint64_t f = 0; f < weights_.size(); ++f) {
            const double d = coordinate(axes_[dim], register_indices(f)[dim]) - m;
            v += weights_[f] * d * d;
        }
        return v;
    }

private:
    std::vector<GridAxis> axes_;
    std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Constructors

inline constexpr double kTruncationWarningMass = 0.99;

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Analytic Gaussian mass inside the grid's bounding box (cell edges included).
inline double gaussian_captured_mass(const std::vector<GridAxis>& axes,
                                     const std::vector<double>& mean,
                                     const std::vector<double>& stddev) {
    double mass = 1.0;
    for (std::size_t j = 0; j < axes.size(); ++j) {
        const auto& a = axes[j];
        const double lo = coordinate(a, a.is_signed ? signed_encode(a, a.min_signed()) : 0) - a.delta / 2;
        const double hi =
            coordinate(a, a.is_signed ? signed_encode(a, a.max_signed()) : a.size() - 1) + a.delta / 2;
        mass *= standard_normal_cdf((hi - mean[j]) / stddev[j]) -
                standard_normal_cdf((lo - mean[j]) / stddev[j]);
    }
    return mass;
}

/// Diagonal Gaussian sampled at the grid coordinates, renormalized to unit mass.
/// Appends a warning when the grid holds less than 99% of the analytic mass.
inline PointMassDensity discretize_gaussian(const std::vector<GridAxis>& axes,
                                            const std::vector<double>& mean,
                                            const std::vector<double>& stddev,
                                            Warnings* warnings = nullptr) {
    if (mean.size() != axes.size() || stddev.size() != axes.size())
        throw std::invalid_argument("discretize_gaussian: mean/std dimension mismatch");
    for (double s : stddev)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("discretize_gaussian: std must be positive; use delta_density for point masses");

    // Per-axis factors; the product density is separable.
    std::vector<std::vector<double>> factors(axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) {
        factors[j].resize(axes[j].size());
        for (std::uint64_t i = 0; i < axes[j].size(); ++i) {
            const double z = (coordinate(axes[j], i) - mean[j]) / stddev[j];
            factors[j][i] = std::exp(-0.5 * z * z);
        }
    }
    std::vector<double> w(PointMassDensity::grid_size(axes));
    for (std::uint64_t f = 0; f < w.size(); ++f) {
        double v = 1.0;
        std::uint64_t rest = f;
        for (std::size_t j = 0; j < axes.size(); ++j) {
            v *= factors[j][rest & (axes[j].size() - 1)];
            rest >>= axes[j].num_qubits;
        }
        w[f] = v;
    }

    const double captured = gaussian_captured_mass(axes, mean, stddev);
    if (captured < kTruncationWarningMass && warnings) {
        std::ostringstream os;
        os << "discretize_gaussian: grid captures only " << captured * 100.0
           << "% of the analytic mass; result renormalized";
        warnings->push_back(os.str());
    }
    return PointMassDensity::normalized(axes, std::move(w));
}

inline std::vector<std::uint64_t> register_point(const std::vector<GridAxis>& axes,
                                                 const std::vector<double>& point) {
    if (point.size() != axes.size())
        throw std::invalid_argument("grid point has " + std::to_string(point.size()) +
                                    " coordinates, grid has " + std::to_string(axes.size()) + " axes");
    std::vector<std::uint64_t> idx(axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) {
        idx[j] = register_index_of(axes[j], point[j]);
        if (std::abs(coordinate(axes[j], idx[j]) - point[j]) > 1e-9 * axes[j].delta) {
            std::ostringstream os;
            os << "coordinate " << point[j] << " is not a grid point of " << axes[j].describe();
            throw std::out_of_range(os.str());
        }
    }
    return idx;
}

inline PointMassDensity delta_density(const std::vector<GridAxis>& axes,
                                      const std::vector<double>& grid_point) {
    std::vector<double> w(PointMassDensity::grid_size(axes), 0.0);
    const auto idx = register_point(axes, grid_point);
    std::uint64_t flat = 0;
    int shift = 0;
    for (std::size_t j = 0; j < axes.size(); ++j) {
        flat |= idx[j] << shift;
        shift += axes[j].num_qubits;
    }
    w[flat] = 1.0;
    return PointMassDensity(axes, std::move(w));
}

/// Density with the given weights at the given support points, zero elsewhere.
inline PointMassDensity tabulated_density(const std::vector<GridAxis>& axes,
                                          const std::vector<std::vector<double>>& support,
                                          const std::vector<double>& weights) {
    if (support.size() != weights.size())
        throw std::invalid_argument("tabulated_density: support/weight count mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("tabulated_density: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "tabulated_density: weights sum to " << total << ", expected 1";
        throw std::invalid_argument(os.str());
    }
    std::vector<double> w(PointMassDensity::grid_size(axes), 0.0);
    for (std::size_t k = 0; k < support.size(); ++k) {
        const auto idx = register_point(axes, support[k]);
        std::uint64_t flat = 0;
        int shift = 0;
        for (std::size_t j = 0; j < axes.size(); ++j) {
            flat |= idx[j] << shift;
            shift += axes[j].num_qubits;
        }
        w[flat] += weights[k];
    }
    return PointMassDensity(axes, std::move(w));
}

/// Total-variation distance between two probability vectors of equal length.
inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

// ---------------------------------------------------------------------------
// CSV

/// Formats a real with 12 significant digits.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Writes `flat_index,coord_dim0,...,coord_dimK,weight`. Zero-weight cells are
/// skipped unless `dense`.
inline void write_density_csv(std::ostream& os, const PointMassDensity& density, bool dense) {
    os << "flat_index";
    for (std::size_t j = 0; j < density.dims(); ++j) os << ",coord_dim" << j;
    os << ",weight\n";
    for (std::uint64_t f = 0; f < density.size(); ++f) {
        if (!dense && density[f] == 0.0) continue;
        os << f;
        for (double x : density.coordinates(f)) os << ',' << format_real(x);
        os << ',' << format_real(density[f]) << '\n';
    }
}

}  // namespace qgbf
