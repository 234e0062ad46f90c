#include "reachmlp/oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "reachmlp/rng.hpp"
#include "test_support.hpp"

using namespace reachmlp;
using testsupport::example1_net;

namespace {

const InputBox kX1{{0.0, 0.0}, {1.0, 1.0}};

}  // namespace

TEST(SampleContainment, ZeroSamplesGiveEmptyReport) {
    const Mlp net = example1_net();
    const ReachEstimate est = output_reach(net, {kX1}, 0.1);
    const SampleReport report = sample_containment(net, {kX1}, est, 0, 1);
    EXPECT_EQ(report.sample_count, 0u);
    EXPECT_TRUE(report.violations.empty());
    EXPECT_DOUBLE_EQ(report.max_observed_deviation, 0.0);
}

TEST(SampleContainment, Example1TenThousandSamplesAllInside) {
    const Mlp net = example1_net();
    const ReachEstimate est = output_reach(net, {kX1}, 0.1);
    const SampleReport report = sample_containment(net, {kX1}, est, 10000, 2024);
    EXPECT_EQ(report.sample_count, 10000u);
    EXPECT_TRUE(report.violations.empty());
}

TEST(SampleContainment, DetectsTruncatedEstimate) {
    // identity net: tubes coincide with the cells, so removing the central
    // tube leaves a real hole around (0.5, 0.5) that samples must hit
    LayerParams layer;
    layer.rows = 2;
    layer.cols = 2;
    layer.weights = {1.0, 0.0, 0.0, 1.0};
    layer.biases = {0.0, 0.0};
    layer.activation = Activation::linear();
    const Mlp net({layer});

    ReachEstimate est = output_reach(net, {kX1}, 0.1);
    est.tubes.erase(est.tubes.begin() + 12);  // cell centered at (0.5, 0.5)
    const SampleReport report = sample_containment(net, {kX1}, est, 10000, 2024);
    ASSERT_FALSE(report.violations.empty());
    EXPECT_GT(report.max_observed_deviation, 0.0);
    // each witness really escapes, really comes from the input box, and
    // lands inside the dropped cell
    for (const auto& [in, out] : report.violations) {
        EXPECT_TRUE(kX1.contains(in));
        EXPECT_FALSE(contains(est, out));
        EXPECT_EQ(out, forward(net, in));
        EXPECT_LT(std::abs(out[0] - 0.5), 0.1);
        EXPECT_LT(std::abs(out[1] - 0.5), 0.1);
    }
}

TEST(SampleContainment, ReproducibleForFixedSeed) {
    const Mlp net = example1_net();
    ReachEstimate est = output_reach(net, {kX1}, 0.1);
    est.tubes.resize(10);
    const SampleReport a = sample_containment(net, {kX1}, est, 500, 99);
    const SampleReport b = sample_containment(net, {kX1}, est, 500, 99);
    ASSERT_EQ(a.violations.size(), b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        EXPECT_EQ(a.violations[i].first, b.violations[i].first);
    }
}

TEST(BruteSensitivity, CollapsedBallGivesZero) {
    EXPECT_DOUBLE_EQ(brute_sensitivity(example1_net(), Vec{0.5, 0.5}, 0.0, 3), 0.0);
}

TEST(BruteSensitivity, LinearNetExactAtCorners) {
    LayerParams layer;
    layer.rows = 2;
    layer.cols = 2;
    layer.weights = {1.0, -3.0, 0.5, 0.5};
    layer.biases = {0.2, -0.1};
    layer.activation = Activation::linear();
    const Mlp net({layer});
    const double delta = 0.2;
    EXPECT_NEAR(brute_sensitivity(net, Vec{0.3, 0.4}, delta, 5), delta * 4.0, 1e-12);
}

TEST(BruteSensitivity, DominatedByChainBound) {
    const Mlp net = example1_net();
    const double eps = max_sensitivity(net, Vec{0.5, 0.5}, 0.1).epsilon;
    const double brute = brute_sensitivity(net, Vec{0.5, 0.5}, 0.1, 101);
    EXPECT_LE(brute, eps);
    EXPECT_GT(brute, 0.0);
}

TEST(BruteSensitivity, RejectsOversizedGrid) {
    LayerParams layer;
    layer.rows = 1;
    layer.cols = 6;
    layer.weights = std::vector<double>(6, 1.0);
    layer.biases = {0.0};
    layer.activation = Activation::linear();
    const Mlp net({layer});
    EXPECT_THROW(brute_sensitivity(net, Vec(6, 0.0), 0.1, 100), std::invalid_argument);
    EXPECT_THROW(brute_sensitivity(net, Vec(6, 0.0), 0.1, 1), std::invalid_argument);
}

TEST(CornerLpOracle, MirrorsClosedFormExamples) {
    const Mlp net = example1_net();
    // degenerate ball
    for (const auto& b : corner_lp_oracle(net.layers()[0], Vec{0.5, 0.5}, 0.0)) {
        EXPECT_DOUBLE_EQ(b.beta_min, b.beta_nominal);
        EXPECT_DOUBLE_EQ(b.beta_max, b.beta_nominal);
    }
    // zero weight row
    LayerParams flat;
    flat.rows = 1;
    flat.cols = 2;
    flat.weights = {0.0, 0.0};
    flat.biases = {0.7};
    flat.activation = Activation::linear();
    const auto fb = corner_lp_oracle(flat, Vec{3.0, -4.0}, 0.5);
    EXPECT_DOUBLE_EQ(fb[0].beta_min, 0.7);
    EXPECT_DOUBLE_EQ(fb[0].beta_max, 0.7);
    // reference neuron-1 bounds
    const auto bounds = corner_lp_oracle(net.layers()[0], Vec{0.5, 0.5}, 0.1);
    EXPECT_NEAR(bounds[0].beta_min, 0.15238, 1e-12);
    EXPECT_NEAR(bounds[0].beta_max, 0.49612, 1e-12);
}

TEST(CornerLpOracle, RejectsWideLayers) {
    LayerParams layer;
    layer.rows = 1;
    layer.cols = 21;
    layer.weights = std::vector<double>(21, 1.0);
    layer.biases = {0.0};
    layer.activation = Activation::linear();
    EXPECT_THROW(corner_lp_oracle(layer, Vec(21, 0.0), 0.1), std::invalid_argument);
}

TEST(Tightness, TubeCornersThemselvesGiveZero) {
    const Mlp net = example1_net();
    const ReachEstimate est = output_reach(net, {kX1}, 0.25);
    // corners nudged one ulp inward so the precondition holds despite the
    // outward rounding of center + radius
    std::vector<Vec> corners;
    for (const ReachTube& t : est.tubes) {
        for (int sx : {-1, 1}) {
            for (int sy : {-1, 1}) {
                const Vec corner = {t.center[0] + sx * t.radius, t.center[1] + sy * t.radius};
                corners.push_back({std::nextafter(corner[0], t.center[0]),
                                   std::nextafter(corner[1], t.center[1])});
            }
        }
    }
    EXPECT_NEAR(tightness(est, corners), 0.0, 1e-12);
}

TEST(Tightness, PointEstimateWithOwnCenter) {
    ReachEstimate est;
    est.output_dim = 2;
    est.cell_count = 1;
    est.input_delta = 0.1;
    est.tubes.push_back({0, {1.0, -2.0}, 0.0, true});
    EXPECT_DOUBLE_EQ(tightness(est, {{1.0, -2.0}}), 0.0);
}

TEST(Tightness, RejectsOutsideSamplesAndEmptySets) {
    ReachEstimate est;
    est.output_dim = 1;
    est.tubes.push_back({0, {0.0}, 1.0, true});
    EXPECT_THROW(tightness(est, {}), std::invalid_argument);
    EXPECT_THROW(tightness(est, {{5.0}}), std::invalid_argument);
}

TEST(ArmForward, FullyExtendedAndRightAngle) {
    ArmConfig cfg;
    cfg.l1 = 1.0;
    cfg.l2 = 1.0;
    const auto [x0, y0] = arm_forward(cfg, 0.0, 0.0);
    EXPECT_NEAR(x0, 2.0, 1e-15);
    EXPECT_NEAR(y0, 0.0, 1e-15);
    const auto [x1, y1] = arm_forward(cfg, std::numbers::pi / 2.0, 0.0);
    EXPECT_NEAR(x1, 0.0, 1e-15);
    EXPECT_NEAR(y1, 2.0, 1e-15);
}

TEST(GenArmData, NineRowGridStaysInsideReach) {
    ArmConfig cfg;  // defaults: l1=10, l2=7, normal working zone
    std::ostringstream out;
    gen_arm_data(cfg, 3, out);
    std::istringstream in(out.str());
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, "theta1,theta2,x,y");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        double t1, t2, x, y;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t1, &t2, &x, &y), 4);
        // recompute trigonometrically
        EXPECT_NEAR(x, cfg.l1 * std::cos(t1) + cfg.l2 * std::cos(t1 + t2), 1e-12);
        EXPECT_NEAR(y, cfg.l1 * std::sin(t1) + cfg.l2 * std::sin(t1 + t2), 1e-12);
        EXPECT_LE(x * x + y * y, (cfg.l1 + cfg.l2) * (cfg.l1 + cfg.l2) + 1e-9);
        ++rows;
    }
    EXPECT_EQ(rows, 9u);
}

TEST(GenArmData, ValidatesConfig) {
    ArmConfig bad;
    bad.l1 = 0.0;
    std::ostringstream out;
    EXPECT_THROW(gen_arm_data(bad, 3, out), std::invalid_argument);
    ArmConfig wrap;
    wrap.theta1_max = 7.0;  // > 2*pi
    EXPECT_THROW(gen_arm_data(wrap, 3, out), std::invalid_argument);
}

// Dominance: the grid search can never exceed the chain bound.
TEST(Oracle, BruteForceDominatedOnRandomNets) {
    SplitRng rng(31337);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Mlp net = testsupport::random_net(seed);
        Vec x(net.input_dim());
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        const double delta = rng.uniform(0.01, 0.5);
        const double eps = max_sensitivity(net, x, delta).epsilon;
        const double brute = brute_sensitivity(net, x, delta, 5);
        EXPECT_LE(brute, eps) << "seed " << seed;
    }
}
