#include "reachmlp/lattice.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "reachmlp/rng.hpp"

using namespace reachmlp;

namespace {

InputBox unit_square() { return {{0.0, 0.0}, {1.0, 1.0}}; }

}  // namespace

TEST(Discretize, UnitSquareRadiusTenth) {
    const auto cells = discretize(unit_square(), 0.1);
    ASSERT_EQ(cells.size(), 25u);
    // row-major: first cell at the low corner, last at the high corner
    EXPECT_DOUBLE_EQ(cells.front().center[0], 0.1);
    EXPECT_DOUBLE_EQ(cells.front().center[1], 0.1);
    EXPECT_DOUBLE_EQ(cells.back().center[0], 0.9);
    EXPECT_DOUBLE_EQ(cells.back().center[1], 0.9);
    for (const LatticeCell& c : cells) EXPECT_DOUBLE_EQ(c.radius, 0.1);
}

TEST(Discretize, RectangularStrip) {
    const InputBox x2{{-1.0, 0.4}, {2.0, 0.6}};
    EXPECT_EQ(discretize(x2, 0.1).size(), 15u);   // 15 x 1
    EXPECT_EQ(discretize(x2, 0.05).size(), 60u);  // 30 x 2
}

TEST(Discretize, SingleCoveringCell) {
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
        InputBox box{Vec(n, 0.0), Vec(n, 1.0)};
        const auto cells = discretize(box, 0.5);
        ASSERT_EQ(cells.size(), 1u);
        for (double c : cells.front().center) EXPECT_DOUBLE_EQ(c, 0.5);
    }
}

TEST(Discretize, CountLaw) {
    SplitRng rng(311);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.next_u64() % 3;
        InputBox box;
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = rng.uniform(-3.0, 3.0);
            box.lower.push_back(lo);
            box.upper.push_back(lo + rng.uniform(0.01, 4.0));
        }
        const double delta = rng.uniform(0.05, 1.0);
        std::size_t expected = 1;
        for (std::size_t j = 0; j < n; ++j) {
            const double width = box.upper[j] - box.lower[j];
            expected *= std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(width / (2.0 * delta))));
        }
        EXPECT_EQ(discretize(box, delta).size(), expected);
    }
}

// Halving the radius multiplies the count by 2^n on exact-multiple widths.
TEST(Discretize, HalvingLaw) {
    const InputBox box = unit_square();
    std::size_t prev = discretize(box, 0.1).size();
    for (double delta : {0.05, 0.025, 0.0125}) {
        const std::size_t count = discretize(box, delta).size();
        EXPECT_EQ(count, prev * 4);
        prev = count;
    }
}

TEST(Discretize, DeterministicOrdering) {
    const InputBox box{{0.0, -1.0}, {0.7, 1.3}};
    const auto a = discretize(box, 0.17);
    const auto b = discretize(box, 0.17);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].center, b[i].center);
        EXPECT_EQ(a[i].radius, b[i].radius);
    }
    // last dimension varies fastest
    ASSERT_GE(a.size(), 2u);
    EXPECT_EQ(a[0].center[0], a[1].center[0]);
    EXPECT_LT(a[0].center[1], a[1].center[1]);
}

TEST(Discretize, ZeroWidthDimensionCenterOnFace) {
    const InputBox box{{0.0, 2.5}, {1.0, 2.5}};
    const auto cells = discretize(box, 0.25);
    EXPECT_EQ(cells.size(), 2u);
    for (const LatticeCell& c : cells) EXPECT_DOUBLE_EQ(c.center[1], 2.5);
}

TEST(Discretize, RejectsBadInput) {
    EXPECT_THROW(discretize(unit_square(), 0.0), std::invalid_argument);
    EXPECT_THROW(discretize(unit_square(), -0.5), std::invalid_argument);
    EXPECT_THROW(discretize(InputBox{{1.0}, {0.0}}, 0.1), std::invalid_argument);
    EXPECT_THROW(discretize(InputBox{{}, {}}, 0.1), std::invalid_argument);
}

TEST(DiscretizeUnion, DeduplicatesIdenticalCenters) {
    const InputBox box = unit_square();
    const auto once = discretize_union({box}, 0.1);
    const auto twice = discretize_union({box, box}, 0.1);
    EXPECT_EQ(once.size(), twice.size());
}

TEST(DiscretizeUnion, KeepsDistinctBoxes) {
    const InputBox a{{0.0}, {1.0}};
    const InputBox b{{10.0}, {11.0}};
    EXPECT_EQ(discretize_union({a, b}, 0.5).size(), 2u);
}

TEST(Covers, DiscretizeOutputCoversByConstruction) {
    SplitRng rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.next_u64() % 3;
        InputBox box;
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = rng.uniform(-2.0, 2.0);
            box.lower.push_back(lo);
            box.upper.push_back(lo + rng.uniform(0.0, 3.0));
        }
        const auto cells = discretize(box, rng.uniform(0.05, 0.8));
        EXPECT_TRUE(covers(cells, box, 2000, rep));
    }
}

TEST(Covers, DetectsDeletedCellWithWitness) {
    const InputBox box = unit_square();
    auto cells = discretize(box, 0.1);
    // drop an interior cell: center (0.5, 0.5)
    const auto middle = std::find_if(cells.begin(), cells.end(), [](const LatticeCell& c) {
        return std::abs(c.center[0] - 0.5) < 1e-12 && std::abs(c.center[1] - 0.5) < 1e-12;
    });
    ASSERT_NE(middle, cells.end());
    const LatticeCell dropped = *middle;
    cells.erase(middle);

    Vec witness;
    EXPECT_FALSE(covers(cells, box, 100000, 7, &witness));
    ASSERT_EQ(witness.size(), 2u);
    EXPECT_TRUE(dropped.contains(witness));
}

TEST(Covers, SingleBigCell) {
    const InputBox box = unit_square();
    const std::vector<LatticeCell> one = {{{0.5, 0.5}, 0.5}};
    EXPECT_TRUE(covers(one, box, 5000, 3));
    EXPECT_THROW(covers({}, box, 10, 0), std::invalid_argument);
}
