#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gravattn/geometry.hpp"
#include "gravattn/scanpath.hpp"

namespace gravattn {

struct StimulusRecord {
    std::string id;
    std::filesystem::path image_path;
    std::filesystem::path fixations_path;
    Size native_size;
    double exposure = 0.0;  // s
    std::optional<std::string> category;
    std::vector<std::string> subjects;
    std::vector<Scanpath> human_scanpaths;  // native pixel coordinates
    std::size_t dropped_fixations = 0;
};

struct DatasetManifest {
    std::string name;
    std::filesystem::path root;
    double pixels_per_degree = 0.0;  // at the working resolution
    std::vector<StimulusRecord> records;
};

/// Parses a manifest JSON file:
///   { "name": str, "pixels_per_degree": num, "root": str (optional),
///     "records": [ { "id": str, "image": path, "fixations_csv": path,
///                    "exposure_s": num, "category": str (optional) } ] }
/// Relative paths resolve against `root`, itself relative to the manifest's
/// directory. Every referenced file is opened and validated.
DatasetManifest load_manifest(const std::filesystem::path& path);

struct FixationTable {
    std::vector<std::string> subjects;  // sorted
    std::vector<Scanpath> scanpaths;    // parallel to `subjects`, ordered by idx
    std::size_t dropped = 0;            // rows outside the native bounds
};

/// Reads `subject,idx,x,y,t_start,t_end` rows (header mandatory).
FixationTable parse_fixations_csv(const std::filesystem::path& path, Size native_size);

/// Per-axis linear rescale of fixation coordinates; times unchanged.
Scanpath to_working_coords(const Scanpath& scanpath, Size native_size, Size working_size);

/// Human scanpaths of a record mapped to the working raster.
std::vector<Scanpath> working_scanpaths(const StimulusRecord& record, Size working_size);

}  // namespace gravattn
