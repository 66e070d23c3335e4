#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gravattn/imaging.hpp"

namespace gravattn {

struct Blob {
    Vec2 center;
    double sigma = 6.0;  // px
    std::array<double, 3> color{1.0, 1.0, 1.0};
};

/// Gaussian blobs composited (per-channel max) over a uniform background.
Frame make_blob_frame(Size size, const std::vector<Blob>& blobs, std::array<double, 3> background = {0, 0, 0});

struct SyntheticCorpusOptions {
    std::size_t images = 6;
    std::size_t subjects = 4;
    Size native_size{320, 240};
    double exposure = 3.0;
    std::uint64_t seed = 7;
    std::string name = "synthetic";
    double pixels_per_degree = 7.5;
};

/// Writes a deterministic corpus of blob images, "human" fixation CSVs that
/// visit the blob centres, and a manifest. Returns the manifest path.
std::filesystem::path write_synthetic_corpus(const std::filesystem::path& dir, const SyntheticCorpusOptions& opts);

}  // namespace gravattn
