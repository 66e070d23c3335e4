#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gravattn/config.hpp"
#include "gravattn/data.hpp"
#include "gravattn/dynamics.hpp"
#include "gravattn/features.hpp"
#include "gravattn/metrics.hpp"

namespace gravattn {

/// A stimulus resampled to the working raster with its features computed.
struct PreparedStimulus {
    std::string id;
    Size native_size;
    double exposure = kDefaultExposure;
    Frame frame;  // working resolution
    FeatureStack stack;
};

PreparedStimulus prepare_stimulus(const std::string& id, const Frame& native, double exposure,
                                  const RunConfig& config);

struct ModelOutput {
    Scanpath scanpath;          // working coordinates
    Trajectory trajectory;      // GRAV only
    bool fixation_fallback = false;  // GRAV produced no fixation; final position used
    std::size_t wta_fallbacks = 0;
    GrayMap attended;  // filled when requested (GRAV only); see run_model
};

/// Runs the configured model on a prepared stimulus. `config` must be
/// resolved. With `accumulate_attention`, `attended` receives
/// sum_k mu(x, t_k) g(x - a_k) dt over the samples that fall inside
/// extracted fixations: the inhibited mass under the attention footprint
/// integrated along the trajectory while the gaze dwells.
ModelOutput run_model(const PreparedStimulus& stimulus, const RunConfig& config,
                      bool accumulate_attention = false);

/// Maps working-raster coordinates back onto the native image.
Scanpath to_native_coords(const Scanpath& scanpath, Size working_size, Size native_size);

/// One image or every record of a manifest. Writes `<id>.json` (native
/// pixel coordinates, embedded config) and, for GRAV, `<id>_trajectory.csv`
/// (working coordinates) under config.output_dir. Returns written paths.
std::vector<std::filesystem::path> cmd_simulate(const std::filesystem::path& input, const RunConfig& config);

/// Model scanpaths vs. human scanpaths of every record. Records without
/// human data are skipped and listed. Writes `report_<model>_<mode>.json`
/// and `.txt` under config.output_dir when `write_files` is set.
EvalReport evaluate_manifest(const DatasetManifest& manifest, const RunConfig& config);
EvalReport cmd_evaluate(const std::filesystem::path& manifest, const RunConfig& config, bool write_files = true);

struct TuneCandidate {
    double lambda = 0.0;
    double global_gain = 0.0;
    double nss = 0.0;  // mean over images
};

struct TuneResult {
    TuneCandidate best;
    std::vector<TuneCandidate> table;  // lambda-major grid order
};

/// Picks the arg max; ties go to the smaller lambda, then the smaller gain.
TuneCandidate select_best(const std::vector<TuneCandidate>& table);

/// Grid search maximising the mean NSS of the attended-mass map against
/// pooled human fixations.
TuneResult tune_manifest(const DatasetManifest& manifest, const RunConfig& config,
                         const std::vector<double>& lambdas, const std::vector<double>& gains);
TuneResult cmd_tune(const std::filesystem::path& manifest, const RunConfig& config,
                    const std::vector<double>& lambdas, const std::vector<double>& gains);

std::string tune_table(const TuneResult& result);

}  // namespace gravattn
