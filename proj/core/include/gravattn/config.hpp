#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gravattn/dynamics.hpp"
#include "gravattn/features.hpp"
#include "gravattn/gravity.hpp"
#include "gravattn/ior.hpp"
#include "gravattn/metrics.hpp"
#include "gravattn/wta.hpp"

namespace gravattn {

/// Damping and gain selected by `gravattn tune` on the synthetic validation
/// corpus (seed 11, 20 images); see README.
inline constexpr double kDefaultLambda = 40.0;
inline constexpr double kDefaultGlobalGain = 1e10;
/// Model time units per second of viewing; sets how fast inhibition builds.
inline constexpr double kDefaultTimeScale = 50.0;

inline constexpr double kDefaultPixelsPerDegree = 7.5;
inline constexpr double kDefaultExposure = 3.0;

enum class ModelKind { Grav, Wta };

std::string to_string(ModelKind model);
ModelKind parse_model_kind(const std::string& text);

struct FixationParams {
    double vel_threshold = 700.0;  // px/s
    double min_duration = 0.08;    // s
};

/// Everything a run needs. Optional fields are derived per stimulus by
/// `resolve` (exposure time, pixels per degree) unless set explicitly.
struct RunConfig {
    FeatureMode mode = FeatureMode::Basic;
    ModelKind model = ModelKind::Grav;
    Size working_size{224, 224};
    std::optional<double> pixels_per_degree;

    GravityParams gravity{{}, kDefaultGlobalGain};

    double ior_beta = 0.1;
    std::optional<double> ior_sigma;  // px; default 14 px at 7.5 px/deg
    bool ior_enabled = true;

    double lambda = kDefaultLambda;
    std::optional<double> duration;  // s; default = stimulus exposure
    double sample_dt = 0.02;
    double time_scale = kDefaultTimeScale;
    std::optional<Vec2> init_pos;
    Vec2 init_vel{};
    double rtol = 1e-6;
    double atol = 1e-8;
    unsigned rng_seed = 0;

    FixationParams fixation;

    std::optional<double> wta_radius;               // px; default 2 degrees
    std::optional<std::size_t> wta_num_fixations;   // default ceil(3 * exposure)
    std::optional<double> wta_fixation_duration;    // default exposure / count

    MetricSettings metrics;

    std::filesystem::path output_dir = "out";
    std::size_t threads = 0;  // 0 = hardware concurrency

    /// Fills every optional field for a stimulus shown for `exposure`
    /// seconds; `dataset_ppd` is used when pixels_per_degree is unset.
    RunConfig resolve(double exposure, std::optional<double> dataset_ppd = std::nullopt) const;

    /// Throws ConfigError on any parameter violating a module invariant.
    void validate() const;

    // Module parameter blocks; require a resolved config.
    IorParams ior() const;
    SimConfig sim() const;
    WtaConfig wta() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Pretty-printed JSON; optional fields that are unset are written as null.
std::string to_json(const RunConfig& config, int indent = 2);

}  // namespace gravattn
