#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gravattn/features.hpp"
#include "gravattn/gravity.hpp"
#include "gravattn/ior.hpp"
#include "gravattn/scanpath.hpp"

namespace gravattn {

struct GazeState {
    Vec2 position;  // px
    Vec2 velocity;  // px/s
};

enum class FieldEvaluation {
    Grid,    // FFT grid, bilinear interpolation (default)
    Direct,  // exact direct summation at every stage (slow; reference runs)
};

struct SimConfig {
    double lambda = 0.0;  // damping, 1/s; defaults come from DefaultParameters
    double duration = 3.0;
    double sample_dt = 0.02;
    /// Model time units per second of viewing. Inhibition evolves on the
    /// model clock, so the effective IOR rate is beta * time_scale per second.
    double time_scale = 1.0;
    std::optional<Vec2> init_pos;  // image centre when empty
    Vec2 init_vel{};
    double rtol = 1e-6;
    double atol = 1e-8;
    unsigned rng_seed = 0;  // reserved; the dynamics are deterministic
    FieldEvaluation field_evaluation = FieldEvaluation::Grid;

    void validate() const;
    std::size_t sample_count() const;  // number of samples including t = 0
};

struct TrajectorySample {
    double t = 0.0;
    GazeState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

/// Snapshot handed to a simulation observer at every sample boundary,
/// after the inhibition and mass for the next interval have been built.
struct SimSnapshot {
    std::size_t index;
    const TrajectorySample& sample;
    const InhibitionMap& inhibition;
    const MassField& mass;
    const FieldGrid& field;
};

using SimObserver = std::function<void(const SimSnapshot&)>;

/// a'' = -lambda a' + E(a).
Vec2 accel(const GazeState& state, const Vec2& field, double lambda);

/// Integrates the damped gaze equation coupled with inhibition of return.
/// Within each sample interval the field is held fixed and the 4-D system
/// is advanced with an adaptive Dormand-Prince 5(4) pair; at every sample
/// boundary the focus updates I, and mu plus E are rebuilt. The position
/// is clamped to the retina and the outward velocity zeroed on contact.
Trajectory simulate(const Frame& frame, const FeatureStack& stack, const GravityParams& gravity,
                    const IorParams& ior, const SimConfig& config, const SimObserver& observer = {});

/// Variant over a fixed, externally supplied mass (no IOR); used to probe
/// the mechanics in isolation.
Trajectory simulate_static(const MassField& mass, const SimConfig& config, const SimObserver& observer = {});

/// H = |v|^2 / 2 + V(a) with the logarithmic potential of `mass`.
double energy(const GazeState& state, const MassField& mass);

/// Velocity-threshold identification: runs of samples slower than
/// `vel_threshold` (px/s, from finite differences of position) lasting at
/// least `min_duration` seconds become fixations placed at their centroid.
Scanpath extract_fixations(const Trajectory& trajectory, double vel_threshold, double min_duration);

}  // namespace gravattn
