#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gravattn/config.hpp"
#include "gravattn/imaging.hpp"
#include "gravattn/scanpath.hpp"

namespace gravattn {

struct RenderOptions {
    bool features = false;  // one 16-bit PNG per feature map
    bool mass = false;      // mu at t = 0
    bool field = false;     // |E| at t = 0
    bool ior = false;       // I(x, t) every `ior_interval` seconds of a GRAV run
    double ior_interval = 0.5;
};

struct Overlay {
    Size size;
    std::vector<std::uint8_t> rgb;  // interleaved
    std::size_t circles = 0;
    std::size_t segments = 0;
};

/// Numbered fixation circles joined by lines, drawn over `frame`. Throws
/// DataError naming the first fixation outside the image.
Overlay draw_scanpath(const Frame& frame, const Scanpath& scanpath);

struct RenderResult {
    std::size_t circles = 0;
    std::size_t segments = 0;
    std::vector<std::filesystem::path> written;
};

/// Renders `scanpath_json` over `image` into `output` (PNG carrying the
/// config as a text chunk). Raster dumps land next to `output` with the
/// same stem and a suffix per map.
RenderResult cmd_render(const std::filesystem::path& image, const std::filesystem::path& scanpath_json,
                        const std::filesystem::path& output, const RunConfig& config,
                        const RenderOptions& options = {});

}  // namespace gravattn
