#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qgbf/grid.hpp"

using namespace qgbf;

namespace {

const GridAxis kUnit4 = GridAxis::unsigned_axis(0.0, 1.0, 4);
const GridAxis kSigned4 = GridAxis::signed_axis(1.0, 4);

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

TEST(GridAxis, RejectsBadGeometry) {
    EXPECT_THROW(GridAxis::unsigned_axis(0.0, 0.0, 4), std::invalid_argument);
    EXPECT_THROW(GridAxis::unsigned_axis(0.0, -1.0, 4), std::invalid_argument);
    EXPECT_THROW(GridAxis::unsigned_axis(0.0, 1.0, 0), std::invalid_argument);
    EXPECT_EQ(kUnit4.size(), 16u);
    EXPECT_EQ(kSigned4.min_signed(), -8);
    EXPECT_EQ(kSigned4.max_signed(), 7);
    EXPECT_DOUBLE_EQ(kSigned4.xi_min, -8.0);
}

TEST(IndexOf, Examples) {
    EXPECT_EQ(index_of(kUnit4, 7.0), 7u);
    EXPECT_EQ(index_of(kUnit4, 0.0), 0u);
    EXPECT_EQ(index_of(GridAxis::unsigned_axis(-3.0, 0.5, 4), -1.0), 4u);
}

TEST(IndexOf, RoundsHalfUpAndRejectsOutOfRange) {
    EXPECT_EQ(index_of(kUnit4, 6.5), 7u);
    EXPECT_EQ(index_of(kUnit4, 6.49), 6u);
    EXPECT_EQ(index_of(kUnit4, -0.5), 0u);
    EXPECT_THROW(index_of(kUnit4, -0.51), std::out_of_range);
    EXPECT_THROW(index_of(kUnit4, 15.5), std::out_of_range);
    EXPECT_THROW(index_of(kSigned4, 0.0), std::invalid_argument);
    try {
        index_of(kUnit4, 40.0);
        FAIL();
    } catch (const std::out_of_range& e) {
        EXPECT_NE(std::string(e.what()).find("axis"), std::string::npos);
    }
}

TEST(IndexOf, InvertsCoordinateExhaustively) {
    for (int n = 1; n <= 6; ++n) {
        const auto axis = GridAxis::unsigned_axis(-2.25, 0.37, n);
        for (std::uint64_t i = 0; i < axis.size(); ++i) EXPECT_EQ(index_of(axis, coordinate(axis, i)), i);
    }
}

TEST(SignedIndex, EncodeExamples) {
    EXPECT_EQ(signed_encode(kSigned4, -1), 15u);
    EXPECT_EQ(signed_encode(kSigned4, 7), 7u);
    EXPECT_EQ(signed_encode(kSigned4, -8), 8u);
    EXPECT_THROW(signed_encode(kSigned4, 8), std::out_of_range);
    EXPECT_THROW(signed_encode(kSigned4, -9), std::out_of_range);
    EXPECT_THROW(signed_encode(kUnit4, 0), std::invalid_argument);
}

TEST(SignedIndex, DecodeExamples) {
    EXPECT_EQ(signed_decode(kSigned4, 15), -1);
    EXPECT_EQ(signed_decode(kSigned4, 7), 7);
    EXPECT_EQ(signed_decode(kSigned4, 8), -8);
    EXPECT_THROW(signed_decode(kSigned4, 16), std::out_of_range);
}

TEST(SignedIndex, RoundTripExhaustive) {
    for (int n = 1; n <= 6; ++n) {
        const auto axis = GridAxis::signed_axis(1.0, n);
        for (auto s = axis.min_signed(); s <= axis.max_signed(); ++s) {
            const auto u = signed_encode(axis, s);
            EXPECT_LT(u, axis.size());
            EXPECT_EQ(signed_decode(axis, u), s);
        }
    }
}

TEST(DiscretizeGaussian, Case1StateHasModeAtSeven) {
    const auto d = discretize_gaussian({kUnit4}, {7.0}, {1.0});
    EXPECT_NEAR(sum(d.weights()), 1.0, 1e-12);
    const auto mode = std::max_element(d.weights().begin(), d.weights().end()) - d.weights().begin();
    EXPECT_EQ(mode, 7);
    // pdf-at-grid-point discretization: ratio of neighbours is exp(-1/2)
    EXPECT_NEAR(d[8] / d[7], std::exp(-0.5), 1e-12);
}

TEST(DiscretizeGaussian, SignedZeroMeanIsSymmetric) {
    for (double s : {0.5, 1.0, 2.0, 3.0}) {
        const auto d = discretize_gaussian({kSigned4}, {0.0}, {s});
        for (int k = 1; k <= 7; ++k)
            EXPECT_EQ(d[signed_encode(kSigned4, k)], d[signed_encode(kSigned4, -k)]) << "k=" << k << " s=" << s;
    }
}

TEST(DiscretizeGaussian, WarnsWhenGridTruncatesMass) {
    Warnings w;
    discretize_gaussian({kSigned4}, {0.0}, {2.0}, &w);
    EXPECT_TRUE(w.empty());
    discretize_gaussian({kSigned4}, {0.0}, {4.0}, &w);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NE(w[0].find("analytic mass"), std::string::npos);
}

TEST(DiscretizeGaussian, RejectsNonPositiveStd) {
    EXPECT_THROW(discretize_gaussian({kUnit4}, {7.0}, {0.0}), std::invalid_argument);
}

TEST(DeltaDensity, Examples) {
    const auto d = delta_density({kUnit4}, {7.0});
    EXPECT_EQ(d[7], 1.0);
    EXPECT_EQ(sum(d.weights()), 1.0);
    const auto d2 = delta_density({GridAxis::unsigned_axis(0, 1, 2)}, {0.0});
    EXPECT_EQ(d2[0], 1.0);
    const auto d3 = delta_density({kUnit4, kUnit4}, {3.0, 5.0});
    for (std::size_t f = 0; f < d3.size(); ++f) EXPECT_EQ(d3[f], f == 5 * 16 + 3 ? 1.0 : 0.0);
    EXPECT_THROW(delta_density({kUnit4}, {7.5}), std::out_of_range);
    EXPECT_THROW(delta_density({kUnit4}, {16.0}), std::out_of_range);
}

TEST(TabulatedDensity, Case4NoiseTable) {
    const auto d = tabulated_density({kSigned4}, {{-4}, {-2}, {0}, {2}, {4}}, {1. / 16, 1. / 4, 3. / 8, 1. / 4, 1. / 16});
    int nonzero = 0;
    for (double w : d.weights()) nonzero += w != 0.0;
    EXPECT_EQ(nonzero, 5);
    EXPECT_EQ(d[signed_encode(kSigned4, -4)], 1. / 16);
    EXPECT_EQ(d[signed_encode(kSigned4, -2)], 1. / 4);
    EXPECT_EQ(d[0], 3. / 8);
    EXPECT_EQ(d[2], 1. / 4);
    EXPECT_EQ(d[4], 1. / 16);
}

TEST(TabulatedDensity, SinglePointEqualsDelta) {
    EXPECT_EQ(tabulated_density({kUnit4}, {{9.0}}, {1.0}).weights(), delta_density({kUnit4}, {9.0}).weights());
}

TEST(TabulatedDensity, TwoSidedPointsUseTwosComplement) {
    const auto d = tabulated_density({kSigned4}, {{-1}, {1}}, {0.5, 0.5});
    EXPECT_EQ(d[15], 0.5);
    EXPECT_EQ(d[1], 0.5);
}

TEST(TabulatedDensity, Validation) {
    EXPECT_THROW(tabulated_density({kSigned4}, {{-1}, {1}}, {0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(tabulated_density({kSigned4}, {{-9}}, {1.0}), std::out_of_range);
    EXPECT_THROW(tabulated_density({kSigned4}, {{-1}, {1}}, {-0.5, 1.5}), std::invalid_argument);
}

TEST(PointMassDensity, ConstructorEnforcesInvariants) {
    EXPECT_THROW(PointMassDensity({kUnit4}, std::vector<double>(15, 1.0 / 15)), std::invalid_argument);
    std::vector<double> w(16, 1.0 / 16);
    w[0] = -w[0];
    EXPECT_THROW(PointMassDensity({kUnit4}, w), std::invalid_argument);
    EXPECT_THROW(PointMassDensity({kUnit4}, std::vector<double>(16, 0.1)), std::invalid_argument);
}

TEST(PointMassDensity, ConstructedDensitiesAreNormalized) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const auto ax = GridAxis::unsigned_axis(u(rng), 0.25 + std::abs(u(rng)), n);
        const auto d = discretize_gaussian({ax, kSigned4}, {coordinate(ax, 1), u(rng)}, {0.3 + std::abs(u(rng)), 1.5});
        EXPECT_NEAR(sum(d.weights()), 1.0, 1e-12);
        for (double w : d.weights()) EXPECT_GE(w, 0.0);
        const auto r = oracle::random_density({ax}, rng);
        EXPECT_NEAR(sum(r.weights()), 1.0, 1e-12);
    }
}

TEST(PointMassDensity, FlatIndexIsLittleEndianInDimensionOrder) {
    const auto ax3 = GridAxis::unsigned_axis(0, 1, 3);
    const auto d = delta_density({kUnit4, ax3}, {2.0, 5.0});
    EXPECT_EQ(d.flat_index({2, 5}), 2u + 5u * 16u);
    EXPECT_EQ(d.register_indices(2 + 5 * 16), (std::vector<std::uint64_t>{2, 5}));
    EXPECT_EQ(d.coordinates(2 + 5 * 16), (std::vector<double>{2.0, 5.0}));
}

TEST(DensityCsv, SparseAndDense) {
    const auto d = tabulated_density({kSigned4}, {{-1}, {1}}, {0.5, 0.5});
    std::ostringstream sparse, dense;
    write_density_csv(sparse, d, false);
    write_density_csv(dense, d, true);
    EXPECT_EQ(sparse.str(), "flat_index,coord_dim0,weight\n1,1,0.5\n15,-1,0.5\n");
    int lines = 0;
    for (char c : dense.str()) lines += c == '\n';
    EXPECT_EQ(lines, 17);
}
