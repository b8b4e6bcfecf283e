#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qgbf/classical.hpp"

using namespace qgbf;

namespace {

const GridAxis kUnit4 = GridAxis::unsigned_axis(0.0, 1.0, 4);
const GridAxis kSigned4 = GridAxis::signed_axis(1.0, 4);

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

PointMassDensity case4_noise() {
    return tabulated_density({kSigned4}, {{-4}, {-2}, {0}, {2}, {4}}, {1. / 16, 1. / 4, 3. / 8, 1. / 4, 1. / 16});
}

}  // namespace

TEST(Convolution, DeltaShiftedByDelta) {
    const auto c = convolve_circular(delta_density({kUnit4}, {7.0}), delta_density({kSigned4}, {-1.0}));
    EXPECT_EQ(c[6], 1.0);
    const auto wrap = convolve_circular(delta_density({kUnit4}, {15.0}), delta_density({kSigned4}, {2.0}));
    EXPECT_EQ(wrap[1], 1.0);
}

TEST(Convolution, Case4Weights) {
    const auto c = convolve_circular(delta_density({kUnit4}, {7.0}), case4_noise());
    const std::vector<std::pair<int, double>> expected{{3, 1. / 16}, {5, 1. / 4}, {7, 3. / 8}, {9, 1. / 4}, {11, 1. / 16}};
    double placed = 0.0;
    for (const auto& [i, p] : expected) {
        EXPECT_NEAR(c[static_cast<std::size_t>(i)], p, 1e-15);
        placed += c[static_cast<std::size_t>(i)];
    }
    EXPECT_NEAR(placed, 1.0, 1e-15);
}

TEST(Convolution, RejectsMismatchedGrids) {
    EXPECT_THROW(convolve_circular(delta_density({kUnit4}, {7.0}), delta_density({GridAxis::signed_axis(0.5, 4)}, {0.5})),
                 std::invalid_argument);
    EXPECT_THROW(convolve_circular(delta_density({kUnit4}, {7.0}), delta_density({kSigned4, kSigned4}, {0.0, 0.0})),
                 std::invalid_argument);
}

TEST(Convolution, CommutesOnRegisterIndices) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const auto ax = GridAxis::unsigned_axis(0, 1, 2 + t % 3);
        const auto sax = GridAxis::signed_axis(1, ax.num_qubits);
        const auto a = oracle::random_density({ax}, rng);
        const auto b = oracle::random_density({sax}, rng);
        // Same weights, roles swapped.
        const auto a_as_noise = PointMassDensity({sax}, a.weights());
        const auto b_as_state = PointMassDensity({ax}, b.weights());
        EXPECT_LT(oracle::max_abs_diff(convolve_circular(a, b).weights(), convolve_circular(b_as_state, a_as_noise).weights()),
                  1e-15);
    }
}

TEST(Convolution, MatchesCoordinateOracle) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 30; ++t) {
        std::vector<GridAxis> axes{GridAxis::unsigned_axis(-2.0, 0.25, 2 + t % 3)};
        if (t % 3 == 0) axes.push_back(GridAxis::unsigned_axis(1.0, 2.0, 3));
        std::vector<GridAxis> noise_axes;
        for (const auto& a : axes) noise_axes.push_back(GridAxis::signed_axis(a.delta, a.num_qubits));
        const auto s = oracle::random_density(axes, rng);
        const auto w = oracle::random_density(noise_axes, rng);
        EXPECT_LT(oracle::max_abs_diff(convolve_circular(s, w).weights(), oracle::convolution_by_coordinates(s, w)), 1e-14);
    }
}

TEST(Convolution, FftAgreesWithDirectSum) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 100; ++t) {
        std::vector<GridAxis> axes{GridAxis::unsigned_axis(0, 1, 1 + t % 5)};
        if (t % 2) axes.push_back(GridAxis::unsigned_axis(0, 1, 1 + t % 3));
        std::vector<GridAxis> noise_axes;
        for (const auto& a : axes) noise_axes.push_back(GridAxis::signed_axis(a.delta, a.num_qubits));
        const auto s = oracle::random_density(axes, rng);
        const auto w = oracle::random_density(noise_axes, rng);
        EXPECT_LE(total_variation(convolve_circular(s, w).weights(), convolve_circular_fft(s, w).weights()), 1e-12);
    }
}

TEST(Advect, IdentityLeavesDensityUnchanged) {
    std::mt19937_64 rng(43);
    const auto d = oracle::random_density({kUnit4}, rng);
    const auto m = DynamicsModel::identity(delta_density({kSigned4}, {0.0}));
    EXPECT_LT(oracle::max_abs_diff(advect(d, m, {}, {kUnit4}).weights(), d.weights()), 1e-15);
}

TEST(Advect, WholeCellShift) {
    const auto m = DynamicsModel::affine({1.0}, {1.0}, delta_density({kSigned4}, {0.0}));
    const auto out = advect(delta_density({kUnit4}, {7.0}), m, {}, {kUnit4});
    EXPECT_EQ(out[8], 1.0);
    // control input adds on top of the offset
    EXPECT_EQ(advect(delta_density({kUnit4}, {7.0}), m, {2.0}, {kUnit4})[10], 1.0);
}

TEST(Advect, FractionalShiftSplitsLinearly) {
    const auto m = DynamicsModel::affine({1.0}, {0.25}, delta_density({kSigned4}, {0.0}));
    const auto out = advect(delta_density({kUnit4}, {7.0}), m, {}, {kUnit4});
    EXPECT_NEAR(out[7], 0.75, 1e-15);
    EXPECT_NEAR(out[8], 0.25, 1e-15);
}

TEST(Advect, BilinearInTwoDimensions) {
    const auto ax = GridAxis::unsigned_axis(0, 1, 3);
    const auto sax = GridAxis::signed_axis(1, 3);
    const auto m = DynamicsModel::affine({1.0, 1.0}, {0.5, 0.5}, delta_density({sax, sax}, {0.0, 0.0}));
    const auto out = advect(delta_density({ax, ax}, {2.0, 4.0}), m, {}, {ax, ax});
    for (std::size_t f : {2 + 4 * 8, 3 + 4 * 8, 2 + 5 * 8, 3 + 5 * 8}) EXPECT_NEAR(out[f], 0.25, 1e-15);
}

TEST(Advect, ConservesMassOnRandomDensities) {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        const auto d = oracle::random_density({kUnit4}, rng);
        const auto m = DynamicsModel::affine({0.9 + 0.1 * u(rng)}, {0.5 + u(rng)}, delta_density({kSigned4}, {0.0}));
        Warnings w;
        const auto out = advect(d, m, {}, {kUnit4}, &w);
        EXPECT_NEAR(sum(out.weights()), 1.0, 1e-12);
        for (double x : out.weights()) EXPECT_GE(x, 0.0);
    }
}

TEST(Advect, DropsMassLeavingTheGrid) {
    const auto m = DynamicsModel::affine({1.0}, {1.0}, delta_density({kSigned4}, {0.0}));
    const auto d = tabulated_density({kUnit4}, {{14.0}, {15.0}}, {0.5, 0.5});
    Warnings w;
    const auto out = advect(d, m, {}, {kUnit4}, &w);
    EXPECT_EQ(out[15], 1.0);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NE(w[0].find("left the target grid"), std::string::npos);
    EXPECT_THROW(advect(delta_density({kUnit4}, {15.0}), m, {}, {kUnit4}), std::runtime_error);
    EXPECT_THROW(advect(d, m, {}, {kSigned4}), std::invalid_argument);
}

TEST(MeasurementUpdate, ModeMovesToMeasurement) {
    const auto prior = PointMassDensity::normalized({kUnit4}, std::vector<double>(16, 1.0));
    const auto upd = measurement_update(prior, MeasurementModel::gaussian({1.0}), {8.0});
    const auto& w = upd.posterior.weights();
    EXPECT_EQ(std::max_element(w.begin(), w.end()) - w.begin(), 8);
    EXPECT_NEAR(sum(w), 1.0, 1e-12);
    EXPECT_NEAR(w[7], w[9], 1e-15);
}

TEST(MeasurementUpdate, FlatLikelihoodKeepsPrior) {
    std::mt19937_64 rng(53);
    const auto prior = oracle::random_density({kUnit4}, rng);
    const MeasurementModel flat{[](const StateVec&, const StateVec&) { return 0.3; }};
    const auto upd = measurement_update(prior, flat, {0.0});
    EXPECT_LT(oracle::max_abs_diff(upd.posterior.weights(), prior.weights()), 1e-15);
    EXPECT_NEAR(upd.log_evidence, std::log(0.3), 1e-15);
}

TEST(MeasurementUpdate, DeltaPriorIsFixedPoint) {
    const auto prior = delta_density({kUnit4}, {5.0});
    const auto upd = measurement_update(prior, MeasurementModel::gaussian({2.0}), {9.0});
    EXPECT_EQ(upd.posterior[5], 1.0);
    EXPECT_NEAR(upd.log_evidence, -0.5 * 4.0, 1e-15);
}

TEST(MeasurementUpdate, InvariantToLikelihoodScale) {
    std::mt19937_64 rng(59);
    const auto prior = oracle::random_density({kUnit4}, rng);
    const auto g = MeasurementModel::gaussian({1.5});
    const MeasurementModel scaled{[&](const StateVec& z, const StateVec& x) { return 7.0 * g.likelihood(z, x); }};
    const auto a = measurement_update(prior, g, {6.3});
    const auto b = measurement_update(prior, scaled, {6.3});
    EXPECT_LT(oracle::max_abs_diff(a.posterior.weights(), b.posterior.weights()), 1e-15);
    EXPECT_NEAR(b.log_evidence - a.log_evidence, std::log(7.0), 1e-12);
}

TEST(MeasurementUpdate, Errors) {
    const auto prior = delta_density({kUnit4}, {5.0});
    const MeasurementModel zero{[](const StateVec&, const StateVec&) { return 0.0; }};
    const MeasurementModel negative{[](const StateVec&, const StateVec&) { return -1.0; }};
    EXPECT_THROW(measurement_update(prior, zero, {0.0}), std::runtime_error);
    EXPECT_THROW(measurement_update(prior, negative, {0.0}), std::invalid_argument);
}

TEST(BinomialKernel, MatchesEnumeration) {
    for (int r = 1; r <= 7; ++r) {
        const auto k = binomial_walk_kernel({kSigned4}, r);
        std::vector<double> expected(16, 0.0);
        for (const auto& [offset, p] : oracle::enumerate_walk(r)) expected[signed_encode(kSigned4, offset)] += p;
        EXPECT_LT(oracle::max_abs_diff(k.weights(), expected), 1e-15) << "r=" << r;
    }
    EXPECT_THROW(binomial_walk_kernel({kSigned4}, 0), std::invalid_argument);
}

TEST(BinomialKernel, FourStepsIsTheCase4Table) {
    EXPECT_LT(oracle::max_abs_diff(binomial_walk_kernel({kSigned4}, 4).weights(), case4_noise().weights()), 1e-15);
}

TEST(BinomialKernel, WrapsOnSmallRegisters) {
    const auto ax = GridAxis::signed_axis(1, 1);  // {-1, 0}
    const auto k = binomial_walk_kernel({ax}, 1);
    EXPECT_EQ(k[1], 1.0);  // +1 and -1 coincide mod 2
}
