#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gravattn/dynamics.hpp"
#include "gravattn/error.hpp"
#include "gravattn/synthetic.hpp"
#include "test_support.hpp"

using namespace gravattn;
using namespace gravattn::testing;

namespace {

SimConfig base_config(double lambda, double duration = 1.0) {
    SimConfig c;
    c.lambda = lambda;
    c.duration = duration;
    return c;
}

MassField blob_mass(Size s, Vec2 c, double sigma, double total) {
    GrayMap m(s, 0.0);
    double sum = 0.0;
    for (std::size_t y = 0; y < s.height; ++y) {
        for (std::size_t x = 0; x < s.width; ++x) {
            m(x, y) = std::exp(-norm_sq(Vec2{double(x), double(y)} - c) / (2 * sigma * sigma));
            sum += m(x, y);
        }
    }
    for (double& v : m.values()) v *= total / sum;
    return MassField(m);
}

Trajectory constructed(std::initializer_list<std::pair<int, Vec2>> segments, double dt) {
    // Each segment holds a position for `count` samples.
    Trajectory t;
    double time = 0.0;
    for (const auto& [count, p] : segments) {
        for (int i = 0; i < count; ++i) {
            t.samples.push_back({time, {p, {}}});
            time += dt;
        }
    }
    return t;
}

}  // namespace

TEST(Accel, Examples) {
    EXPECT_EQ(accel({{0, 0}, {0, 0}}, {0, 0}, 3.0), (Vec2{0, 0}));
    EXPECT_EQ(accel({{0, 0}, {1, 0}}, {0, 0}, 2.0), (Vec2{-2, 0}));
    EXPECT_EQ(accel({{0, 0}, {0, 0}}, {0.5, -0.25}, 2.0), (Vec2{0.5, -0.25}));
}

TEST(SimConfig, Validation) {
    SimConfig c = base_config(1.0);
    EXPECT_NO_THROW(c.validate());
    c.lambda = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = base_config(1.0);
    c.sample_dt = 2.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = base_config(1.0);
    c.sample_dt = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = base_config(1.0);
    c.time_scale = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_EQ(base_config(1.0, 3.0).sample_count(), 151u);
}

TEST(Simulate, ZeroMassAtRestStaysPut) {
    SimConfig c = base_config(4.0);
    c.init_pos = Vec2{10.25, 20.5};
    const Trajectory t = simulate_static(MassField(GrayMap({40, 40}, 0.0)), c);
    ASSERT_EQ(t.samples.size(), c.sample_count());
    for (const auto& s : t.samples) {
        EXPECT_NEAR(s.state.position.x, 10.25, 1e-9);
        EXPECT_NEAR(s.state.position.y, 20.5, 1e-9);
    }
}

TEST(Simulate, ZeroMassDampedDrift) {
    const double u = 40.0, lambda = 2.0;
    SimConfig c = base_config(lambda, 2.0);
    c.init_pos = Vec2{10, 32};
    c.init_vel = Vec2{u, 0};
    const Trajectory t = simulate_static(MassField(GrayMap({64, 64}, 0.0)), c);
    for (const auto& s : t.samples) {
        const double v = u * std::exp(-lambda * s.t);
        EXPECT_NEAR(s.state.velocity.x, v, 1e-6 * v);
        EXPECT_EQ(s.state.velocity.y, 0.0);
        EXPECT_NEAR(s.state.position.x, 10 + u / lambda * (1 - std::exp(-lambda * s.t)), 1e-5);
    }
}

TEST(Simulate, ZeroFeatureFrameMatchesStatic) {
    const Frame f = Frame::constant({32, 32}, 0.4, 0.4, 0.4);
    const FeatureStack s = basic_stack(f);
    SimConfig c = base_config(3.0, 0.5);
    c.init_vel = Vec2{5, -3};
    const Trajectory a = simulate(f, s, GravityParams{{}, 1.0}, IorParams{0.1, 5.0, true}, c);
    const Trajectory b = simulate_static(MassField(GrayMap({32, 32}, 0.0)), c);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].state.position, b.samples[i].state.position);
    }
}

TEST(Simulate, CompactBlobAttractsAndSettles) {
    const Size s{64, 64};
    const Vec2 x0{44, 22};
    // Heavy damping keeps the approach overdamped all the way in.
    const MassField mu = blob_mass(s, x0, 1.5, 4e6);
    SimConfig c = base_config(800.0, 2.0);
    c.init_pos = Vec2{16, 40};
    const Trajectory t = simulate_static(mu, c);

    // Reference run with much tighter tolerances as the numeric oracle.
    SimConfig tight = c;
    tight.rtol = 1e-10;
    tight.atol = 1e-12;
    const Trajectory ref = simulate_static(mu, tight);

    const double d_end = distance(t.samples.back().state.position, x0);
    EXPECT_LT(d_end, 2.0);
    EXPECT_LT(distance(t.samples.back().state.position, ref.samples.back().state.position), 0.05);

    // Monotone approach once the initial transient has passed.
    std::size_t k0 = 0;
    while (k0 < t.samples.size() && distance(t.samples[k0].state.position, x0) > 10.0) ++k0;
    ASSERT_LT(k0, t.samples.size());
    for (std::size_t k = k0 + 1; k < t.samples.size(); ++k) {
        EXPECT_LE(distance(t.samples[k].state.position, x0), distance(t.samples[k - 1].state.position, x0) + 1e-9)
            << "t=" << t.samples[k].t;
    }
}

TEST(Simulate, TrajectoryInvariants) {
    const Frame f = make_blob_frame({48, 48}, {Blob{{12, 12}, 3.0, {1, 1, 1}}, Blob{{36, 30}, 3.0, {1, 0, 0}}});
    const FeatureStack s = basic_stack(f);
    SimConfig c = base_config(20.0, 1.0);
    c.init_vel = Vec2{300, -500};
    const Trajectory t = simulate(f, s, GravityParams{{}, 1e6}, IorParams{0.1, 5.0, true}, c);
    ASSERT_FALSE(t.samples.empty());
    EXPECT_EQ(t.samples.front().t, 0.0);
    EXPECT_EQ(t.samples.front().state.position, retina_center({48, 48}));
    EXPECT_EQ(t.samples.front().state.velocity, (Vec2{300, -500}));
    for (std::size_t k = 1; k < t.samples.size(); ++k) EXPECT_GT(t.samples[k].t, t.samples[k - 1].t);
    for (const auto& smp : t.samples) {
        EXPECT_GE(smp.state.position.x, 0.0);
        EXPECT_GE(smp.state.position.y, 0.0);
        EXPECT_LE(smp.state.position.x, 47.0);
        EXPECT_LE(smp.state.position.y, 47.0);
    }
}

TEST(Simulate, ConfinedToRetina) {
    SimConfig c = base_config(0.5, 1.0);
    c.init_pos = Vec2{5, 5};
    c.init_vel = Vec2{-400, 250};
    const Trajectory t = simulate_static(MassField(GrayMap({32, 32}, 0.0)), c);
    for (const auto& s : t.samples) {
        EXPECT_GE(s.state.position.x, 0.0);
        EXPECT_LE(s.state.position.y, 31.0);
    }
    // Outward velocity is removed at the wall; the tangential part survives.
    EXPECT_EQ(t.samples.back().state.position.x, 0.0);
    EXPECT_EQ(t.samples.back().state.velocity.x, 0.0);
}

TEST(Simulate, Deterministic) {
    const Frame f = make_blob_frame({40, 40}, {Blob{{10, 12}, 3.0, {1, 1, 1}}, Blob{{30, 28}, 3.0, {0, 1, 0}}});
    const FeatureStack s = basic_stack(f);
    SimConfig c = base_config(20.0, 0.6);
    const Trajectory a = simulate(f, s, GravityParams{{}, 1e6}, IorParams{0.5, 5.0, true}, c);
    const Trajectory b = simulate(f, s, GravityParams{{}, 1e6}, IorParams{0.5, 5.0, true}, c);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].state.position, b.samples[i].state.position);
        EXPECT_EQ(a.samples[i].state.velocity, b.samples[i].state.velocity);
    }
}

TEST(Simulate, ObserverSeesEverySample) {
    const Frame f = make_blob_frame({32, 32}, {Blob{{10, 10}, 3.0, {1, 1, 1}}});
    SimConfig c = base_config(10.0, 0.2);
    std::size_t calls = 0;
    double last_inhibition = 0.0;
    simulate(f, basic_stack(f), GravityParams{{}, 1e5}, IorParams{0.5, 4.0, true}, c, [&](const SimSnapshot& snap) {
        EXPECT_EQ(snap.index, calls);
        EXPECT_EQ(snap.field.source_hash, snap.mass.hash());
        last_inhibition = snap.inhibition.values().max();
        ++calls;
    });
    EXPECT_EQ(calls, c.sample_count());
    EXPECT_GT(last_inhibition, 0.0);
}

TEST(Simulate, TimeScaleSpeedsUpInhibition) {
    const Frame f = make_blob_frame({32, 32}, {Blob{{16, 16}, 3.0, {1, 1, 1}}});
    SimConfig c = base_config(10.0, 0.2);
    c.init_pos = Vec2{16, 16};
    auto peak = [&](double scale) {
        c.time_scale = scale;
        double p = 0.0;
        simulate(f, basic_stack(f), GravityParams{{}, 1.0}, IorParams{0.1, 4.0, true}, c,
                 [&](const SimSnapshot& s) { p = s.inhibition.values().max(); });
        return p;
    };
    // Ten refreshes of 20 ms with the focus essentially fixed at the centre.
    EXPECT_NEAR(peak(1.0), 1 - std::exp(-0.1 * 0.2), 1e-6);
    EXPECT_NEAR(peak(50.0), 1 - std::exp(-0.1 * 0.2 * 50), 1e-6);
}

TEST(Simulate, InitPosOutsideRetinaThrows) {
    SimConfig c = base_config(1.0);
    c.init_pos = Vec2{-1, 3};
    EXPECT_THROW(simulate_static(MassField(GrayMap({16, 16}, 0.0)), c), ConfigError);
}

TEST(Simulate, DirectEvaluationAgreesWithGrid) {
    const Size s{32, 32};
    const MassField mu = blob_mass(s, {22, 9}, 2.0, 3e3);
    SimConfig c = base_config(15.0, 0.5);
    c.init_pos = Vec2{8, 24};
    const Trajectory g = simulate_static(mu, c);
    c.field_evaluation = FieldEvaluation::Direct;
    const Trajectory d = simulate_static(mu, c);
    EXPECT_LT(distance(g.samples.back().state.position, d.samples.back().state.position), 0.5);
}

TEST(Energy, Examples) {
    const MassField zero(GrayMap({8, 8}, 0.0));
    EXPECT_EQ(energy({{3, 3}, {0, 0}}, zero), 0.0);
    EXPECT_DOUBLE_EQ(energy({{3, 3}, {3, 4}}, zero), 12.5);
}

TEST(Energy, NonIncreasingWithStaticMass) {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> pos(10.0, 22.0), vel(-60.0, 60.0);
    for (int trial = 0; trial < 3; ++trial) {
        GrayMap m = gaussian_blur(random_map({32, 32}, 300 + trial), 1.5);
        for (double& v : m.values()) v *= 400.0;
        const MassField mu(m);
        SimConfig c = base_config(3.0, 1.0);
        c.field_evaluation = FieldEvaluation::Direct;
        c.init_pos = Vec2{pos(rng), pos(rng)};
        c.init_vel = Vec2{vel(rng), vel(rng)};
        const Trajectory t = simulate_static(mu, c);
        for (std::size_t k = 1; k < t.samples.size(); ++k) {
            EXPECT_LE(energy(t.samples[k].state, mu), energy(t.samples[k - 1].state, mu) + 1e-6);
        }
    }
}

TEST(Fixations, ConstantTrajectoryIsOneFixation) {
    const Trajectory t = constructed({{151, {40, 50}}}, 0.02);
    const Scanpath s = extract_fixations(t, 700, 0.08);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s.fixations[0].x, 40, 1e-12);
    EXPECT_NEAR(s.fixations[0].y, 50, 1e-12);
    EXPECT_NEAR(s.fixations[0].t_start, 0.0, 1e-12);
    EXPECT_NEAR(s.fixations[0].t_end, 3.0, 1e-9);
}

TEST(Fixations, DwellJumpDwell) {
    // 200 ms dwell, 40 ms of fast jumps, 200 ms dwell at 10 ms sampling.
    Trajectory t;
    const double dt = 0.01;
    for (int k = 0; k < 44; ++k) {
        Vec2 p;
        if (k < 20) p = {20, 20};
        else if (k < 24) p = {20.0 + 20.0 * (k - 19), 20};
        else p = {100, 20};
        t.samples.push_back({k * dt, {p, {}}});
    }
    const Scanpath s = extract_fixations(t, 700, 0.08);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s.fixations[0].x, 20.0, 1e-12);
    EXPECT_NEAR(s.fixations[1].x, 100.0, 1e-12);
    EXPECT_LT(s.fixations[0].t_end, s.fixations[1].t_start);
}

TEST(Fixations, AllFastIsEmpty) {
    Trajectory t;
    for (int k = 0; k < 50; ++k) t.samples.push_back({k * 0.02, {{k * 20.0, 0}, {}}});
    EXPECT_TRUE(extract_fixations(t, 700, 0.08).empty());
}

TEST(Fixations, ShortDwellDiscarded) {
    Trajectory t;
    for (int k = 0; k < 30; ++k) {
        const double x = k < 3 ? 0.0 : (k < 6 ? 100.0 * (k - 2) : 400.0);
        t.samples.push_back({k * 0.02, {{x, 0}, {}}});
    }
    const Scanpath s = extract_fixations(t, 700, 0.08);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s.fixations[0].x, 400.0, 1e-12);
}

TEST(Fixations, EmptyTrajectoryThrows) {
    EXPECT_THROW(extract_fixations(Trajectory{}, 700, 0.08), ConfigError);
}
