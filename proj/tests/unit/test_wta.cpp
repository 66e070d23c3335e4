#include <gtest/gtest.h>

#include <cmath>

#include "gravattn/error.hpp"
#include "gravattn/synthetic.hpp"
#include "gravattn/wta.hpp"
#include "test_support.hpp"

using namespace gravattn;
using namespace gravattn::testing;

TEST(Wta, TwoPeaksInOrder) {
    GrayMap m({40, 30}, 0.0);
    m(5, 5) = 0.6;
    m(30, 20) = 0.9;
    const WtaResult r = wta_scanpath(m, WtaConfig{4.0, 2, 0.5});
    ASSERT_EQ(r.scanpath.size(), 2u);
    EXPECT_EQ(r.scanpath.fixations[0], (Fixation{30, 20, 0.0, 0.5}));
    EXPECT_EQ(r.scanpath.fixations[1], (Fixation{5, 5, 0.5, 1.0}));
    EXPECT_EQ(r.fallback_count, 0u);
}

TEST(Wta, TiesResolveRowMajor) {
    GrayMap m({10, 10}, 0.0);
    m(7, 2) = 1.0;
    m(3, 4) = 1.0;
    m(1, 2) = 1.0;
    const WtaResult r = wta_scanpath(m, WtaConfig{1.0, 3, 0.1});
    ASSERT_EQ(r.scanpath.size(), 3u);
    EXPECT_EQ(r.scanpath.fixations[0].position(), (Vec2{1, 2}));
    EXPECT_EQ(r.scanpath.fixations[1].position(), (Vec2{7, 2}));
    EXPECT_EQ(r.scanpath.fixations[2].position(), (Vec2{3, 4}));
}

TEST(Wta, ExhaustedMapFallsBackToCentre) {
    GrayMap m({21, 11}, 0.0);
    m(10, 5) = 1.0;
    const WtaResult r = wta_scanpath(m, WtaConfig{3.0, 3, 0.2});
    ASSERT_EQ(r.scanpath.size(), 3u);
    EXPECT_EQ(r.fallback_count, 2u);
    EXPECT_EQ(r.scanpath.fixations[1].position(), retina_center({21, 11}));
    EXPECT_NEAR(r.scanpath.fixations[2].t_end, 0.6, 1e-12);
}

TEST(Wta, SeparationAtLeastRadius) {
    const GrayMap m = gaussian_blur(random_map({64, 48}, 5), 2.0);
    const double radius = 6.5;
    const WtaResult r = wta_scanpath(m, WtaConfig{radius, 12, 0.25});
    ASSERT_EQ(r.fallback_count, 0u);
    for (std::size_t i = 0; i < r.scanpath.size(); ++i) {
        for (std::size_t j = i + 1; j < r.scanpath.size(); ++j) {
            EXPECT_GE(distance(r.scanpath.fixations[i].position(), r.scanpath.fixations[j].position()), radius);
        }
    }
}

TEST(Wta, DurationsTileTheExposure) {
    const WtaResult r = wta_scanpath(random_map({16, 16}, 9), WtaConfig{2.0, 9, 1.0 / 3.0});
    ASSERT_EQ(r.scanpath.size(), 9u);
    for (std::size_t k = 0; k < 9; ++k) {
        EXPECT_NEAR(r.scanpath.fixations[k].t_start, k / 3.0, 1e-12);
        EXPECT_NEAR(r.scanpath.fixations[k].t_end, (k + 1) / 3.0, 1e-12);
    }
}

TEST(Wta, InvariantUnderPositiveScaling) {
    const GrayMap m = random_map({32, 32}, 17);
    GrayMap scaled = m;
    for (double& v : scaled.values()) v *= 37.5;
    const WtaConfig c{5.0, 8, 0.3};
    EXPECT_EQ(wta_scanpath(m, c).scanpath, wta_scanpath(scaled, c).scanpath);
}

TEST(Wta, StackUsesEqualWeightCombination) {
    const Frame f = make_blob_frame({48, 48}, {Blob{{12, 30}, 3.0, {1, 1, 1}}, Blob{{36, 10}, 3.0, {1, 0, 0}}});
    const FeatureStack s = basic_stack(f);
    const WtaConfig c{8.0, 4, 0.25};
    EXPECT_EQ(wta_scanpath(s, c).scanpath, wta_scanpath(combine_equal_weights(s), c).scanpath);
}

TEST(Wta, ConfigValidation) {
    const GrayMap m({8, 8}, 1.0);
    EXPECT_THROW(wta_scanpath(m, WtaConfig{0.0, 1, 1.0}), ConfigError);
    EXPECT_THROW(wta_scanpath(m, WtaConfig{1.0, 0, 1.0}), ConfigError);
    EXPECT_THROW(wta_scanpath(m, WtaConfig{1.0, 1, 0.0}), ConfigError);
}
