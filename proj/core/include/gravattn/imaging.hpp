#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "gravattn/geometry.hpp"

namespace gravattn {

/// Dense row-major scalar raster.
class GrayMap {
public:
    GrayMap() = default;
    explicit GrayMap(Size size, double fill = 0.0);
    GrayMap(Size size, std::vector<double> values);

    std::size_t width() const { return size_.width; }
    std::size_t height() const { return size_.height; }
    Size size() const { return size_; }
    bool empty() const { return values_.empty(); }

    double operator()(std::size_t x, std::size_t y) const { return values_[y * size_.width + x]; }
    double& operator()(std::size_t x, std::size_t y) { return values_[y * size_.width + x]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double min() const;
    double max() const;
    double sum() const;
    double mean() const;

private:
    Size size_;
    std::vector<double> values_;
};

/// Raster of 2-vectors (dx, dy) in pixel units.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(Size size) : size_(size), values_(size.area()) {}

    std::size_t width() const { return size_.width; }
    std::size_t height() const { return size_.height; }
    Size size() const { return size_; }

    const Vec2& operator()(std::size_t x, std::size_t y) const { return values_[y * size_.width + x]; }
    Vec2& operator()(std::size_t x, std::size_t y) { return values_[y * size_.width + x]; }

    std::span<const Vec2> values() const { return values_; }

    /// Per-pixel Euclidean norm.
    GrayMap magnitude() const;

private:
    Size size_;
    std::vector<Vec2> values_;
};

/// RGB image with channel values in [0, 1].
class Frame {
public:
    Frame() = default;
    /// Throws ConfigError when the planes disagree in size or hold values
    /// outside [0, 1].
    Frame(GrayMap r, GrayMap g, GrayMap b);

    static Frame constant(Size size, double r, double g, double b);

    std::size_t width() const { return channels_[0].width(); }
    std::size_t height() const { return channels_[0].height(); }
    Size size() const { return channels_[0].size(); }

    const GrayMap& channel(std::size_t c) const { return channels_.at(c); }
    const std::array<GrayMap, 3>& channels() const { return channels_; }

    /// Mean of the three colour planes.
    GrayMap intensity() const;

private:
    std::array<GrayMap, 3> channels_;
};

/// Decodes PNG, JPEG or BMP. 8- and 16-bit inputs are scaled to [0, 1];
/// grayscale inputs are replicated into all three channels.
Frame load_image(const std::filesystem::path& path);

/// Reads only the raster dimensions of an image file.
Size probe_image_size(const std::filesystem::path& path);

/// Bilinear resampling with pixel-centre alignment and clamped borders.
Frame resize_bilinear(const Frame& frame, Size target);
GrayMap resize_bilinear(const GrayMap& map, Size target);

/// Central differences in the interior, one-sided at the borders.
VectorField spatial_gradient(const GrayMap& map);

/// Separable Gaussian filter, kernel truncated at +-3 sigma and normalised,
/// symmetric (half-sample) reflection at the borders.
GrayMap gaussian_blur(const GrayMap& map, double sigma);

/// Normalised 1-D Gaussian taps for the given sigma (length 2*ceil(3 sigma)+1).
std::vector<double> gaussian_kernel(double sigma);

/// 2-D correlation with an odd-sized kernel, symmetric reflection at borders.
GrayMap filter2d(const GrayMap& map, const GrayMap& kernel);

/// Each level is the previous one blurred (sigma = 1) and 2x2 box-decimated.
/// Level 0 is the input itself.
std::vector<GrayMap> gaussian_pyramid(const GrayMap& map, std::size_t levels);

/// Maps an arbitrary index into [0, n) by symmetric reflection.
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

}  // namespace gravattn
