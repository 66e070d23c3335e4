#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gravattn/dynamics.hpp"
#include "gravattn/metrics.hpp"
#include "gravattn/scanpath.hpp"

namespace gravattn {

/// On-disk scanpath document:
///   { "image": id, "model": "GRAV"|"WTA", "config": {...},
///     "fixations": [ {"x": px, "y": px, "t_start": s, "t_end": s} ] }
struct ScanpathDocument {
    std::string image;
    std::string model;
    std::string config_json;  // the embedded "config" object, serialised
    Scanpath scanpath;
};

std::string scanpath_to_json(const ScanpathDocument& doc, int indent = 2);
ScanpathDocument scanpath_from_json(const std::string& text);

void write_scanpath_json(const std::filesystem::path& path, const ScanpathDocument& doc);
ScanpathDocument read_scanpath_json(const std::filesystem::path& path);

/// `t,x,y,vx,vy` with six decimals.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
std::string trajectory_to_csv(const Trajectory& trajectory);

std::string report_to_json(const std::vector<EvalReport>& reports, int indent = 2);
/// Aligned columns, "mean (std)" cells: Model | Pre-attentive maps | SED | TDE | STDE.
std::string report_table(const std::vector<EvalReport>& reports);

}  // namespace gravattn
