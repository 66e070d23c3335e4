#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gravattn/error.hpp"
#include "gravattn/features.hpp"
#include "gravattn/synthetic.hpp"
#include "test_support.hpp"

using namespace gravattn;
using namespace gravattn::testing;

namespace {

Frame step_edge(Size s, std::size_t column) {
    return gray_frame(map_from(s, [&](double x, double) { return x < static_cast<double>(column) ? 0.1 : 0.9; }));
}

GrayMap rotate90(const GrayMap& m) {
    // (x, y) -> (H-1-y, x): a quarter turn of a square raster.
    const std::size_t n = m.width();
    GrayMap r(m.size());
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) r(n - 1 - y, x) = m(x, y);
    }
    return r;
}

GrayMap crop(const GrayMap& m, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) {
    GrayMap c({w, h});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) c(x, y) = m(x0 + x, y0 + y);
    }
    return c;
}

double texture(double x, double y) {
    return 0.5 + 0.2 * std::sin(0.31 * x + 0.17 * y) + 0.15 * std::cos(0.23 * x - 0.29 * y) +
           0.1 * std::sin(0.11 * x * 0.7 + 0.41 * y);
}

double band_sum(const GrayMap& m, std::size_t row, std::size_t half, std::size_t x0, std::size_t x1) {
    double s = 0.0;
    for (std::size_t y = row - half; y <= row + half; ++y) {
        for (std::size_t x = x0; x < x1; ++x) s += m(x, y);
    }
    return s;
}

}  // namespace

TEST(Intensity, ConstantFrameIsZero) {
    EXPECT_EQ(intensity_feature(Frame::constant({32, 32}, 0.2, 0.5, 0.8)).max(), 0.0);
}

TEST(Intensity, StepEdgeIsLocal) {
    const GrayMap m = intensity_feature(step_edge({40, 20}, 20));
    for (std::size_t y = 0; y < 20; ++y) {
        for (std::size_t x = 0; x < 40; ++x) {
            if (x == 19 || x == 20) {
                EXPECT_GT(m(x, y), 0.0);
            } else {
                EXPECT_EQ(m(x, y), 0.0) << x << "," << y;
            }
        }
    }
}

TEST(Intensity, RampGivesInverseWidth) {
    const std::size_t W = 50;
    const GrayMap m =
        intensity_feature(gray_frame(map_from({W, 30}, [&](double x, double) { return x / static_cast<double>(W); })));
    for (std::size_t y = 1; y + 1 < 30; ++y) {
        for (std::size_t x = 1; x + 1 < W; ++x) EXPECT_NEAR(m(x, y), 1.0 / W, 1e-12);
    }
}

TEST(Color, GrayscaleFrameGivesIdenticalMaps) {
    const auto maps = color_features(gray_frame(random_map({24, 24}, 4)));
    ASSERT_EQ(maps.size(), 3u);
    EXPECT_EQ(max_abs_diff(maps[0], maps[1]), 0.0);
    EXPECT_EQ(max_abs_diff(maps[0], maps[2]), 0.0);
}

TEST(Color, RedBlueSplit) {
    const Size s{40, 20};
    const GrayMap left = map_from(s, [](double x, double) { return x < 20 ? 1.0 : 0.0; });
    const GrayMap right = map_from(s, [](double x, double) { return x < 20 ? 0.0 : 1.0; });
    const auto maps = color_features(Frame(left, GrayMap(s, 0.0), right));
    EXPECT_EQ(maps[1].max(), 0.0);
    for (std::size_t c : {0u, 2u}) {
        for (std::size_t y = 0; y < 20; ++y) {
            EXPECT_EQ(maps[c](19, y), maps[c].max());
            EXPECT_EQ(maps[c](20, y), maps[c].max());
            EXPECT_EQ(maps[c](5, y), 0.0);
        }
    }
}

TEST(Color, FirstChannelRamp) {
    const std::size_t H = 40;
    const GrayMap ramp = map_from({30, H}, [&](double, double y) { return y / static_cast<double>(H); });
    const auto maps = color_features(Frame(ramp, GrayMap({30, H}, 0.3), GrayMap({30, H}, 0.0)));
    for (std::size_t y = 1; y + 1 < H; ++y) {
        for (std::size_t x = 1; x + 1 < 30; ++x) EXPECT_NEAR(maps[0](x, y), 1.0 / H, 1e-12);
    }
    EXPECT_EQ(maps[1].max(), 0.0);
    EXPECT_EQ(maps[2].max(), 0.0);
}

TEST(Gabor, KernelIsZeroMeanUnitL1) {
    for (double angle : {0.0, 45.0, 90.0, 135.0}) {
        const GrayMap k = gabor_kernel(angle);
        EXPECT_EQ(k.width() % 2, 1u);
        EXPECT_NEAR(k.sum(), 0.0, 1e-12);
        double l1 = 0.0;
        for (double v : k.values()) l1 += std::abs(v);
        EXPECT_NEAR(l1, 1.0, 1e-12);
    }
}

TEST(Orientation, ConstantFrameGivesZeroMaps) {
    const auto maps = orientation_features(Frame::constant({48, 48}, 0.6, 0.6, 0.6));
    ASSERT_EQ(maps.size(), 4u);
    for (const auto& m : maps) EXPECT_LT(m.max(), 1e-12);
}

TEST(Orientation, HorizontalLinePrefersZeroDegrees) {
    const Size s{64, 64};
    const std::size_t row = 32;
    const Frame f = gray_frame(map_from(s, [&](double, double y) { return std::abs(y - row) < 1.0 ? 1.0 : 0.0; }));

    // Direct filter-response oracle at the line for every kernel.
    const GrayMap i = f.intensity();
    double direct[4];
    const double angles[4] = {0, 45, 90, 135};
    for (int k = 0; k < 4; ++k) {
        const GrayMap ker = gabor_kernel(angles[k]);
        const auto r = static_cast<std::ptrdiff_t>(ker.width() / 2);
        double acc = 0.0;
        for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
            for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
                acc += ker(static_cast<std::size_t>(dx + r), static_cast<std::size_t>(dy + r)) *
                       i(static_cast<std::size_t>(32 + dx), static_cast<std::size_t>(static_cast<std::ptrdiff_t>(row) + dy));
            }
        }
        direct[k] = std::abs(acc);
    }
    const auto responses = orientation_responses(f);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(responses[k](32, row)), direct[k], 1e-12);
    for (int k = 1; k < 4; ++k) EXPECT_GT(direct[0], direct[k]);

    // The gradient of the response ridge peaks just beside the line, so the
    // feature maps are compared over a band around it.
    const auto maps = orientation_features(f);
    const double zero = band_sum(maps[0], row, 4, 16, 48);
    for (int k = 1; k < 4; ++k) EXPECT_GT(zero, band_sum(maps[k], row, 4, 16, 48)) << angles[k];
}

TEST(Orientation, QuarterTurnSwapsZeroAndNinety) {
    const Size s{64, 64};
    // Symmetric grid stimulus: horizontal bars plus a weaker vertical bar.
    const GrayMap m = map_from(s, [](double x, double y) {
        const double h = std::fmod(y, 16.0) < 2.0 ? 0.8 : 0.0;
        const double v = std::abs(x - 40.0) < 1.5 ? 0.3 : 0.0;
        return std::min(1.0, 0.1 + h + v);
    });
    const auto a = orientation_features(gray_frame(m));
    const auto b = orientation_features(gray_frame(rotate90(m)));
    EXPECT_LT(rms_diff(rotate90(a[0]), b[2]), 1e-3);
    EXPECT_LT(rms_diff(rotate90(a[2]), b[0]), 1e-3);
    EXPECT_LT(rms_diff(rotate90(a[1]), b[3]), 1e-3);
    EXPECT_GT(rms_diff(a[0], a[2]), 1e-3);
}

TEST(BasicStack, ConstantFrameAllZero) {
    const FeatureStack s = basic_stack(Frame::constant({32, 32}, 0.3, 0.3, 0.3));
    ASSERT_EQ(s.size(), 8u);
    EXPECT_EQ(s.mode(), FeatureMode::Basic);
    for (const auto& m : s.maps()) EXPECT_LT(m.max(), 1e-12);
}

TEST(BasicStack, LabelsAndNonNegativity) {
    const Frame f(random_map({40, 30}, 1), random_map({40, 30}, 2), random_map({40, 30}, 3));
    const FeatureStack s = basic_stack(f);
    const std::vector<std::string> labels{"intensity", "color_r",   "color_g",  "color_b",
                                          "orient_0",  "orient_45", "orient_90", "orient_135"};
    EXPECT_EQ(s.labels(), labels);
    for (const auto& m : s.maps()) {
        EXPECT_EQ(m.size(), (Size{40, 30}));
        for (double v : m.values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_TRUE(std::isfinite(v));
        }
    }
}

TEST(BasicStack, StepEdgeHasSignal) {
    const FeatureStack s = basic_stack(step_edge({32, 32}, 16));
    double best = 0.0;
    for (const auto& m : s.maps()) best = std::max(best, m.max());
    EXPECT_GT(best, 0.0);
}

TEST(FeatureStack, RejectsBadShapes) {
    EXPECT_THROW(FeatureStack(FeatureMode::Itti, {GrayMap({4, 4}), GrayMap({4, 4})}, {"a", "b"}), ConfigError);
    GrayMap neg({4, 4}, 0.0);
    neg(0, 0) = -1.0;
    EXPECT_THROW(FeatureStack(FeatureMode::Itti, {neg}, {"s"}), ConfigError);
}

TEST(Features, TranslationEquivariantInInterior) {
    const Size s{96, 96};
    const int dx = 5, dy = 3;
    const Frame a = gray_frame(map_from(s, [](double x, double y) { return texture(x, y); }));
    const Frame b = gray_frame(map_from(s, [&](double x, double y) { return texture(x - dx, y - dy); }));
    const FeatureStack fa = basic_stack(a), fb = basic_stack(b);
    for (std::size_t k = 0; k < 8; ++k) {
        const GrayMap ca = crop(fa.maps()[k], 32, 32, 32, 32);
        const GrayMap cb = crop(fb.maps()[k], 32 + dx, 32 + dy, 32, 32);
        EXPECT_LT(rms_diff(ca, cb), 1e-3) << fa.labels()[k];
    }
}

TEST(Itti, UniformFrameIsZero) {
    const FeatureStack s = itti_saliency(Frame::constant({64, 64}, 0.5, 0.5, 0.5));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.mode(), FeatureMode::Itti);
    EXPECT_EQ(s.maps()[0].max(), 0.0);
}

TEST(Itti, BrightBlobIsTheArgmax) {
    const Size s{128, 128};
    const double cx = 40.5, cy = 70.5;  // centre of an 8x8 block at 37..44, 67..74
    const Frame f = gray_frame(map_from(s, [&](double x, double y) {
        return std::abs(x - cx) < 4.0 && std::abs(y - cy) < 4.0 ? 1.0 : 0.0;
    }));
    const GrayMap m = itti_saliency(f).maps()[0];
    EXPECT_NEAR(m.max(), 1.0, 1e-12);
    std::size_t bx = 0, by = 0;
    for (std::size_t y = 0; y < s.height; ++y) {
        for (std::size_t x = 0; x < s.width; ++x) {
            if (m(x, y) > m(bx, by)) bx = x, by = y;
        }
    }
    EXPECT_LE(std::hypot(bx - cx, by - cy), 4.0);
}

TEST(Itti, MirroredBlobsAreSymmetric) {
    // Every pyramid level has an even width, so 2x2 decimation commutes with
    // the mirror.
    const Size s{128, 128};
    const Frame f = make_blob_frame(s, {Blob{{35.0, 40.0}, 5.0, {1, 0.8, 0.2}}, Blob{{92.0, 40.0}, 5.0, {1, 0.8, 0.2}}});
    const GrayMap m = itti_saliency(f).maps()[0];
    GrayMap mirrored(m.size());
    for (std::size_t y = 0; y < s.height; ++y) {
        for (std::size_t x = 0; x < s.width; ++x) mirrored(s.width - 1 - x, y) = m(x, y);
    }
    EXPECT_GT(m.max(), 0.0);
    EXPECT_LT(rms_diff(m, mirrored), 1e-3);
}

TEST(Itti, NormalizeOfFlatMapIsZero) {
    EXPECT_EQ(itti_normalize(GrayMap({16, 16}, 0.0)).max(), 0.0);
}

TEST(Combine, IdenticalMapsIdempotent) {
    const GrayMap m = random_map({16, 16}, 8);
    const FeatureStack s(FeatureMode::Basic, std::vector<GrayMap>(8, m),
                         {"a", "b", "c", "d", "e", "f", "g", "h"});
    EXPECT_LT(max_abs_diff(combine_equal_weights(s), m), 1e-15);
}

TEST(Combine, ZeroAndOneGiveHalf) {
    // A two-map stack is not a valid Basic/Itti stack, so build the mean of
    // four zero and four unit maps instead: still a constant 0.5.
    std::vector<GrayMap> maps;
    for (int i = 0; i < 8; ++i) maps.emplace_back(Size{8, 8}, i % 2 ? 1.0 : 0.0);
    const FeatureStack s(FeatureMode::Basic, maps, {"a", "b", "c", "d", "e", "f", "g", "h"});
    const GrayMap c = combine_equal_weights(s);
    EXPECT_EQ(c.min(), 0.5);
    EXPECT_EQ(c.max(), 0.5);
}

TEST(Combine, RandomMapsMatchDirectMean) {
    std::vector<GrayMap> maps;
    for (unsigned i = 0; i < 8; ++i) maps.push_back(random_map({20, 12}, 100 + i));
    const FeatureStack s(FeatureMode::Basic, maps, {"a", "b", "c", "d", "e", "f", "g", "h"});
    const GrayMap c = combine_equal_weights(s);
    for (std::size_t y = 0; y < 12; ++y) {
        for (std::size_t x = 0; x < 20; ++x) {
            double sum = 0.0;
            for (const auto& m : maps) sum += m(x, y);
            EXPECT_NEAR(c(x, y), sum / 8.0, 1e-15);
        }
    }
}

TEST(FeatureMode, ParsesNames) {
    EXPECT_EQ(parse_feature_mode("Basic"), FeatureMode::Basic);
    EXPECT_EQ(parse_feature_mode("itti"), FeatureMode::Itti);
    EXPECT_THROW(parse_feature_mode("deep"), ConfigError);
}
