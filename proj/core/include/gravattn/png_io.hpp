#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gravattn/imaging.hpp"

namespace gravattn {

/// Key/value pairs stored as PNG tEXt chunks.
using PngText = std::vector<std::pair<std::string, std::string>>;

/// Writes `map` as a 16-bit grayscale PNG. Values are linearly mapped from
/// [lo, hi] onto [0, 65535]; with lo == hi the map's own range is used.
void write_png_gray16(const std::filesystem::path& path, const GrayMap& map,
                      const PngText& text = {}, double lo = 0.0, double hi = 0.0);

/// Writes interleaved 8-bit RGB pixels.
void write_png_rgb8(const std::filesystem::path& path, Size size,
                    std::span<const std::uint8_t> rgb, const PngText& text = {});

/// Reads back the tEXt chunks of a PNG (used to recover embedded configs).
PngText read_png_text(const std::filesystem::path& path);

}  // namespace gravattn
