#pragma once

#include <string>
#include <vector>

#include "gravattn/imaging.hpp"

namespace gravattn {

enum class FeatureMode { Basic, Itti };

std::string to_string(FeatureMode mode);
FeatureMode parse_feature_mode(const std::string& text);

/// Non-negative feature-strength maps sharing one raster size. Basic mode
/// holds [intensity, red, green, blue, o0, o45, o90, o135]; Itti mode holds
/// a single saliency map.
class FeatureStack {
public:
    FeatureStack() = default;
    FeatureStack(FeatureMode mode, std::vector<GrayMap> maps, std::vector<std::string> labels);

    FeatureMode mode() const { return mode_; }
    const std::vector<GrayMap>& maps() const { return maps_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return maps_.size(); }
    Size raster_size() const { return maps_.front().size(); }

private:
    FeatureMode mode_ = FeatureMode::Basic;
    std::vector<GrayMap> maps_;
    std::vector<std::string> labels_;
};

/// Even-symmetric Gabor filter bank used for the orientation channels.
struct GaborParams {
    double wavelength = 8.0;  // px
    double sigma = 4.0;       // px, envelope
};

/// Zero-mean even Gabor kernel tuned to edges/lines running along
/// `angle_deg` (0 = horizontal), truncated at +-3 sigma.
GrayMap gabor_kernel(double angle_deg, const GaborParams& params = {});

/// Gradient magnitude of the intensity (r+g+b)/3.
GrayMap intensity_feature(const Frame& frame);

/// Gradient magnitude of each colour plane, in channel order.
std::vector<GrayMap> color_features(const Frame& frame);

/// Raw Gabor responses of the intensity at 0, 45, 90 and 135 degrees.
std::vector<GrayMap> orientation_responses(const Frame& frame, const GaborParams& params = {});

/// Gradient magnitude of each orientation response.
std::vector<GrayMap> orientation_features(const Frame& frame, const GaborParams& params = {});

FeatureStack basic_stack(const Frame& frame, const GaborParams& params = {});

/// Center-surround saliency over 9-level pyramids (centres 2..4, surround
/// offsets 3..4), map normalisation, equal-weight conspicuity sum. The
/// result is resampled to the frame size and scaled to a peak of 1.
FeatureStack itti_saliency(const Frame& frame);

/// Itti's N(.) operator: rescale to [0,1], then weight by (1 - m)^2 where m
/// is the mean of the local maxima other than the global one.
GrayMap itti_normalize(const GrayMap& map);

/// Per-pixel mean of all maps in the stack.
GrayMap combine_equal_weights(const FeatureStack& stack);

FeatureStack compute_features(const Frame& frame, FeatureMode mode);

}  // namespace gravattn
