#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gravattn/error.hpp"
#include "gravattn/gravity.hpp"
#include "test_support.hpp"

using namespace gravattn;
using namespace gravattn::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Independent brute-force oracle: E(a) = -sum e(a - x) mu(x), core 0.5 px.
Vec2 oracle_field(const GrayMap& mu, Vec2 a) {
    Vec2 e{};
    for (std::size_t y = 0; y < mu.height(); ++y) {
        for (std::size_t x = 0; x < mu.width(); ++x) {
            const double zx = a.x - static_cast<double>(x), zy = a.y - static_cast<double>(y);
            const double r2 = zx * zx + zy * zy;
            if (r2 < 0.25) continue;
            e.x -= mu(x, y) * zx / (kTwoPi * r2);
            e.y -= mu(x, y) * zy / (kTwoPi * r2);
        }
    }
    return e;
}

MassField point_masses(Size s, std::initializer_list<std::pair<Vec2, double>> pts) {
    GrayMap m(s, 0.0);
    for (const auto& [p, w] : pts) m(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y)) += w;
    return MassField(m);
}

FeatureStack single_map_stack(const GrayMap& m) { return FeatureStack(FeatureMode::Itti, {m}, {"saliency"}); }

}  // namespace

TEST(Mass, FullInhibitionClearsMass) {
    const GrayMap f = random_map({16, 16}, 1);
    const MassField mu = mass_from_features(single_map_stack(f), GravityParams{{}, 3.0},
                                            InhibitionMap(GrayMap({16, 16}, 1.0)));
    EXPECT_EQ(mu.values().max(), 0.0);
}

TEST(Mass, IdentityForUnitGains) {
    const GrayMap f = random_map({16, 16}, 2);
    const MassField mu = mass_from_features(single_map_stack(f), GravityParams{{1.0}, 1.0}, InhibitionMap({16, 16}));
    EXPECT_EQ(max_abs_diff(mu.values(), f), 0.0);
}

TEST(Mass, WeightedSumOfEqualMaps) {
    const GrayMap f = random_map({12, 10}, 3);
    std::vector<GrayMap> maps(8, GrayMap({12, 10}, 0.0));
    maps[0] = f;
    maps[1] = f;
    const FeatureStack s(FeatureMode::Basic, maps, {"a", "b", "c", "d", "e", "f", "g", "h"});
    const MassField mu =
        mass_from_features(s, GravityParams{{2, 3, 1, 1, 1, 1, 1, 1}, 1.0}, InhibitionMap({12, 10}));
    for (std::size_t y = 0; y < 10; ++y) {
        for (std::size_t x = 0; x < 12; ++x) EXPECT_NEAR(mu.values()(x, y), 5.0 * f(x, y), 1e-15);
    }
}

TEST(Mass, PartialInhibitionScales) {
    const GrayMap f = random_map({8, 8}, 4);
    const MassField mu =
        mass_from_features(single_map_stack(f), GravityParams{{}, 2.0}, InhibitionMap(GrayMap({8, 8}, 0.25)));
    EXPECT_NEAR(mu.values()(3, 5), 2.0 * 0.75 * f(3, 5), 1e-15);
}

TEST(Mass, DimensionMismatchThrows) {
    EXPECT_THROW(mass_from_features(single_map_stack(GrayMap({8, 8})), GravityParams{}, InhibitionMap({9, 8})),
                 ConfigError);
}

TEST(GravityParams, RejectsNonPositiveGains) {
    EXPECT_THROW((GravityParams{{1.0, 0.0}, 1.0}.validate(2)), ConfigError);
    EXPECT_THROW((GravityParams{{}, -1.0}.validate(8)), ConfigError);
    EXPECT_THROW((GravityParams{{1.0, 1.0}, 1.0}.validate(8)), ConfigError);
}

TEST(Kernel, DirectFormula) {
    Vec2 e = kernel_e({1, 0});
    EXPECT_NEAR(e.x, 1.0 / kTwoPi, 1e-15);
    EXPECT_NEAR(e.x, 0.15915, 1e-5);
    EXPECT_EQ(e.y, 0.0);
    e = kernel_e({0, 2});
    EXPECT_EQ(e.x, 0.0);
    EXPECT_NEAR(e.y, 1.0 / (4.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(e.y, 0.07958, 1e-5);
    EXPECT_EQ(kernel_e({0, 0}), (Vec2{0, 0}));
    EXPECT_EQ(kernel_e({0.3, 0.3}), (Vec2{0, 0}));
}

TEST(FieldAtPoint, ZeroMass) {
    EXPECT_EQ(field_at_point(MassField(GrayMap({10, 10}, 0.0)), {4, 4}), (Vec2{0, 0}));
}

TEST(FieldAtPoint, SinglePointMassPullsTowardIt) {
    const MassField mu = point_masses({16, 4}, {{{10, 0}, 1.0}});
    const Vec2 e = field_at_point(mu, {0, 0});
    EXPECT_NEAR(e.x, 1.0 / (20.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(e.x, 0.015915, 1e-6);
    EXPECT_EQ(e.y, 0.0);
}

TEST(FieldAtPoint, FourSymmetricMassesCancel) {
    const MassField mu = point_masses({21, 21}, {{{16, 10}, 1.0}, {{4, 10}, 1.0}, {{10, 16}, 1.0}, {{10, 4}, 1.0}});
    const Vec2 e = field_at_point(mu, {10, 10});
    EXPECT_NEAR(e.x, 0.0, 1e-12);
    EXPECT_NEAR(e.y, 0.0, 1e-12);
}

TEST(FieldAtPoint, MatchesOracleOffGrid) {
    const GrayMap m = random_map({13, 9}, 6);
    const MassField mu(m);
    for (const Vec2 a : {Vec2{3.3, 4.7}, Vec2{0.0, 0.0}, Vec2{12.0, 8.0}, Vec2{6.5, 2.25}}) {
        const Vec2 e = field_at_point(mu, a), o = oracle_field(m, a);
        EXPECT_NEAR(e.x, o.x, 1e-12);
        EXPECT_NEAR(e.y, o.y, 1e-12);
    }
}

TEST(FieldGrid, ZeroMassZeroField) {
    const FieldGrid g = field_grid(MassField(GrayMap({20, 12}, 0.0)));
    for (const Vec2& v : g.field.values()) EXPECT_EQ(norm(v), 0.0);
}

TEST(FieldGrid, RandomMassMatchesBruteForce) {
    const GrayMap m = random_map({32, 32}, 7);
    const FieldGrid g = field_grid(MassField(m));
    double worst = 0.0;
    for (std::size_t y = 0; y < 32; ++y) {
        for (std::size_t x = 0; x < 32; ++x) {
            const Vec2 o = oracle_field(m, {static_cast<double>(x), static_cast<double>(y)});
            worst = std::max({worst, std::abs(g.field(x, y).x - o.x), std::abs(g.field(x, y).y - o.y)});
        }
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(FieldGrid, NonSquareMatchesBruteForce) {
    const GrayMap m = random_map({37, 18}, 8);
    const FieldGrid g = field_grid(MassField(m));
    for (std::size_t y = 0; y < 18; y += 3) {
        for (std::size_t x = 0; x < 37; x += 4) {
            const Vec2 o = oracle_field(m, {static_cast<double>(x), static_cast<double>(y)});
            EXPECT_NEAR(g.field(x, y).x, o.x, 1e-6);
            EXPECT_NEAR(g.field(x, y).y, o.y, 1e-6);
        }
    }
}

TEST(FieldGrid, MirrorSymmetry) {
    GrayMap m = random_map({24, 16}, 9);
    for (std::size_t y = 0; y < 16; ++y) {
        for (std::size_t x = 0; x < 12; ++x) m(23 - x, y) = m(x, y);
    }
    const FieldGrid g = field_grid(MassField(m));
    for (std::size_t y = 0; y < 16; ++y) {
        for (std::size_t x = 0; x < 24; ++x) {
            EXPECT_NEAR(g.field(x, y).x, -g.field(23 - x, y).x, 1e-9);
            EXPECT_NEAR(g.field(x, y).y, g.field(23 - x, y).y, 1e-9);
        }
    }
}

TEST(FieldGrid, LinearityAndScaling) {
    const GrayMap a = random_map({20, 20}, 10), b = random_map({20, 20}, 11);
    GrayMap sum(a.size()), scaled(a.size());
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        sum.values()[i] = a.values()[i] + b.values()[i];
        scaled.values()[i] = 4.0 * a.values()[i];
    }
    const FieldGrid ga = field_grid(MassField(a)), gb = field_grid(MassField(b));
    const FieldGrid gs = field_grid(MassField(sum)), gc = field_grid(MassField(scaled));
    for (std::size_t i = 0; i < ga.field.values().size(); ++i) {
        const Vec2 l = ga.field.values()[i] + gb.field.values()[i];
        EXPECT_NEAR(gs.field.values()[i].x, l.x, 1e-9);
        EXPECT_NEAR(gs.field.values()[i].y, l.y, 1e-9);
        // Power-of-two scaling is exact in floating point.
        EXPECT_EQ(gc.field.values()[i].x, 4.0 * ga.field.values()[i].x);
        EXPECT_EQ(gc.field.values()[i].y, 4.0 * ga.field.values()[i].y);
    }
}

TEST(FieldGrid, RecordsSourceHash) {
    const MassField a(random_map({8, 8}, 12)), b(random_map({8, 8}, 13));
    EXPECT_EQ(field_grid(a).source_hash, a.hash());
    EXPECT_NE(a.hash(), b.hash());
}

TEST(FieldPotential, GradientMatchesField) {
    const MassField mu(random_map({16, 16}, 14));
    const double h = 1e-4;
    // Cell corners keep the stencil clear of every pixel's core radius.
    for (double y = 3.45; y < 13; y += 2.0) {
        for (double x = 2.55; x < 13; x += 3.0) {
            const Vec2 e = field_at_point(mu, {x, y});
            const double gx = (potential_at_point(mu, {x + h, y}) - potential_at_point(mu, {x - h, y})) / (2 * h);
            const double gy = (potential_at_point(mu, {x, y + h}) - potential_at_point(mu, {x, y - h})) / (2 * h);
            EXPECT_LT(norm(Vec2{gx, gy} + e), 1e-3 * norm(e));
        }
    }
}

TEST(FieldInterp, ExactAtPixelCentre) {
    const FieldGrid g = field_grid(MassField(random_map({10, 10}, 15)));
    EXPECT_EQ(field_interp(g, {3, 7}), g.field(3, 7));
}

TEST(FieldInterp, MidpointAverages) {
    const FieldGrid g = field_grid(MassField(random_map({10, 10}, 16)));
    const Vec2 m = field_interp(g, {3.5, 7});
    const Vec2 expect = (g.field(3, 7) + g.field(4, 7)) * 0.5;
    EXPECT_NEAR(m.x, expect.x, 1e-15);
    EXPECT_NEAR(m.y, expect.y, 1e-15);
    const Vec2 c = field_interp(g, {3.5, 6.5});
    const Vec2 mean = (g.field(3, 6) + g.field(4, 6) + g.field(3, 7) + g.field(4, 7)) * 0.25;
    EXPECT_NEAR(c.x, mean.x, 1e-15);
    EXPECT_NEAR(c.y, mean.y, 1e-15);
}

TEST(FieldInterp, ClampsOutsideRetina) {
    const FieldGrid g = field_grid(MassField(random_map({10, 10}, 17)));
    EXPECT_EQ(field_interp(g, {-5, 20}), g.field(0, 9));
}

TEST(MassField, RejectsNegativeValues) {
    GrayMap m({4, 4}, 0.0);
    m(2, 2) = -0.1;
    EXPECT_THROW(MassField{m}, ConfigError);
}
