#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "heavytail/montecarlo.hpp"
#include "heavytail/risk_path.hpp"

using namespace heavytail;

namespace {

RiskPath toy_path() {
    RiskPath r;
    r.T = 3.0;
    r.jump_times = {0.5, 1.0, 2.0};
    r.jump_sizes = {2.0, 9.0, 5.0};
    return r;
}

MarkedPattern random_pattern(Rng& rng, double T = 10.0) {
    MarkedPattern p;
    p.T = T;
    const int n = static_cast<int>(rng.below(7));
    const ParetoLaw law(1.0);
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
        t += rng.uniform(0.1, (T - t) / (n - i + 1) + 0.1);
        if (t > T) break;
        p.times.push_back(t);
        p.marks.push_back(law.sample(rng));
    }
    return p;
}

}  // namespace

TEST(RiskPathTest, EvaluateWithDrift) {
    RiskPath r;
    r.T = 3.0;
    r.drift = 0.5;
    r.jump_times = {1.0, 2.0};
    r.jump_sizes = {3.0, -1.0};
    EXPECT_DOUBLE_EQ(r.evaluate(0.0), 0.0);
    EXPECT_DOUBLE_EQ(r.evaluate(1.0), 3.5);  // right limit includes the jump
    EXPECT_DOUBLE_EQ(r.evaluate(1.5), 3.75);
    EXPECT_DOUBLE_EQ(r.evaluate(3.0), 3.5);
    EXPECT_THROW(r.evaluate(3.5), std::invalid_argument);
}

TEST(RiskPathTest, BuildAndCenter) {
    MarkedPattern p;
    p.T = 3.0;
    p.times = {1.0, 2.0};
    p.marks = {3.0, 1.5};
    const RiskPath plain = build_risk(p);
    EXPECT_DOUBLE_EQ(plain.evaluate(3.0), 4.5);
    // alpha = 2 claims have mean 2
    const RiskPath centered = build_centered_risk(p, ParetoLaw(2.0).mean());
    EXPECT_DOUBLE_EQ(centered.jump_sizes[0], 1.0);
    EXPECT_DOUBLE_EQ(centered.jump_sizes[1], -0.5);
    EXPECT_DOUBLE_EQ(centered.evaluate(3.0), 0.5);
}

TEST(RiskPathTest, JumpDeltaOrderStats) {
    const RiskPath r = toy_path();
    EXPECT_DOUBLE_EQ(jump_delta(r, 1), 9.0);
    EXPECT_DOUBLE_EQ(jump_delta(r, 2), 5.0);
    EXPECT_DOUBLE_EQ(jump_delta(r, 3), 2.0);
    EXPECT_DOUBLE_EQ(jump_delta(r, 4), 0.0);
    EXPECT_THROW(jump_delta(r, 0), std::invalid_argument);
}

TEST(RiskPathTest, ConeDistancesOnToyPath) {
    const RiskPath r = toy_path();
    EXPECT_DOUBLE_EQ(dist_to_jump_cone(r, 1), 2.5);       // half of second-largest
    EXPECT_DOUBLE_EQ(dist_to_small_jump_cone(r, 1), 7.0);  // 2 + 5
    EXPECT_DOUBLE_EQ(dist_to_jump_cone(r, 0), 4.5);
    EXPECT_DOUBLE_EQ(dist_to_small_jump_cone(r, 0), 16.0);
    EXPECT_DOUBLE_EQ(dist_to_small_jump_cone(r, 5), 0.0);
}

TEST(RiskPathTest, SmallJumpConeRequiresDriftlessNonnegative) {
    RiskPath r = toy_path();
    r.drift = 0.1;
    EXPECT_THROW(dist_to_small_jump_cone(r, 1), std::invalid_argument);
    r.drift = 0.0;
    r.jump_sizes[1] = -9.0;
    EXPECT_THROW(dist_to_small_jump_cone(r, 1), std::invalid_argument);
    EXPECT_NO_THROW(dist_to_jump_cone(r, 1));  // magnitude-based, still fine
    EXPECT_DOUBLE_EQ(dist_to_jump_cone(r, 1), 2.5);
}

TEST(RiskPathTest, SplitConservation) {
    const RiskPath r = toy_path();
    const RiskSplit split = split_risk(r, 1);
    EXPECT_EQ(split.covered.jump_count(), 1u);
    EXPECT_DOUBLE_EQ(split.covered.jump_sizes[0], 9.0);
    EXPECT_EQ(split.residual.jump_count(), 2u);
    for (double t : {0.0, 0.7, 1.0, 1.5, 2.0, 3.0}) {
        EXPECT_NEAR(split.residual.evaluate(t) + split.covered.evaluate(t), r.evaluate(t), 1e-12);
    }
    const RiskSplit all = split_risk(r, 5);
    EXPECT_EQ(all.residual.jump_count(), 0u);
    EXPECT_EQ(all.covered.jump_count(), 3u);
}

TEST(RiskPathTest, TiesSplitDeterministically) {
    RiskPath r;
    r.T = 1.0;
    r.jump_times = {0.2, 0.4, 0.6};
    r.jump_sizes = {5.0, 5.0, 5.0};
    const RiskSplit split = split_risk(r, 2);
    // earlier jumps win ties
    EXPECT_EQ(split.covered.jump_times, (std::vector<double>{0.2, 0.4}));
    EXPECT_EQ(split.residual.jump_times, (std::vector<double>{0.6}));
}

TEST(RiskPathTest, PropertySuiteOverRandomPaths) {
    Rng rng(171);
    for (int trial = 0; trial < 10000; ++trial) {
        const MarkedPattern p = random_pattern(rng);
        const RiskPath r = build_risk(p);
        const int k = static_cast<int>(rng.below(4));

        // order-statistic identity against the mark view
        for (int j = 1; j <= 4; ++j)
            ASSERT_DOUBLE_EQ(jump_delta(r, j), mark_order_stat(p, j));

        // twice the distance to the k-jump cone never exceeds the distance to
        // the small-jump cone
        ASSERT_LE(2.0 * dist_to_jump_cone(r, k), dist_to_small_jump_cone(r, k) + 1e-12);

        // homogeneity under mark scaling
        MarkedPattern scaled = p;
        scale_marks(scaled, 4.0);
        const RiskPath rs = build_risk(scaled);
        ASSERT_NEAR(dist_to_jump_cone(rs, k), dist_to_jump_cone(r, k) / 4.0, 1e-12);
        ASSERT_NEAR(dist_to_small_jump_cone(rs, k), dist_to_small_jump_cone(r, k) / 4.0,
                    1e-9);

        // split conservation at the horizon, and the residual matches the
        // claim-sum shortcut
        const RiskSplit split = split_risk(r, k);
        ASSERT_NEAR(split.residual.evaluate(r.T) + split.covered.evaluate(r.T),
                    r.evaluate(r.T), 1e-9);
        ASSERT_NEAR(split.residual.evaluate(r.T), residual_claim_sum(p, k, p.T), 1e-9);
    }
}

TEST(RiskPathTest, CsvGolden) {
    RiskPath r;
    r.T = 2.0;
    r.drift = 0.0;
    r.jump_times = {0.5, 1.25};
    r.jump_sizes = {1.0, 2.25};
    std::ostringstream os;
    write_csv(r, os);
    EXPECT_EQ(os.str(),
              "time,value_right_limit\n"
              "0,0\n"
              "0.5,1\n"
              "1.25,3.25\n"
              "2,3.25\n");
}
