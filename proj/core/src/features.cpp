#include "gravattn/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gravattn/error.hpp"

namespace gravattn {

std::string to_string(FeatureMode mode) { return mode == FeatureMode::Basic ? "Basic" : "Itti"; }

FeatureMode parse_feature_mode(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "basic") return FeatureMode::Basic;
    if (t == "itti") return FeatureMode::Itti;
    throw ConfigError("unknown feature mode '" + text + "' (expected Basic or Itti)");
}

FeatureStack::FeatureStack(FeatureMode mode, std::vector<GrayMap> maps, std::vector<std::string> labels)
    : mode_(mode), maps_(std::move(maps)), labels_(std::move(labels)) {
    if (maps_.empty()) throw ConfigError("FeatureStack: no maps");
    if (labels_.size() != maps_.size()) throw ConfigError("FeatureStack: label count mismatch");
    const std::size_t expected = mode_ == FeatureMode::Basic ? 8 : 1;
    if (maps_.size() != expected) {
        throw ConfigError("FeatureStack: " + to_string(mode_) + " mode needs " + std::to_string(expected) +
                          " maps, got " + std::to_string(maps_.size()));
    }
    for (const auto& m : maps_) {
        if (m.size() != maps_.front().size()) throw ConfigError("FeatureStack: map sizes differ");
        for (double v : m.values()) {
            if (!std::isfinite(v) || v < 0.0) throw ConfigError("FeatureStack: negative or non-finite value");
        }
    }
}

GrayMap gabor_kernel(double angle_deg, const GaborParams& params) {
    const auto radius = static_cast<std::size_t>(std::ceil(3.0 * params.sigma));
    const Size size{2 * radius + 1, 2 * radius + 1};
    const double theta = angle_deg * std::numbers::pi / 180.0;
    const double k = 2.0 * std::numbers::pi / params.wavelength;
    // The carrier runs along the normal of the preferred orientation.
    const double nx = -std::sin(theta), ny = std::cos(theta);

    GrayMap kernel(size);
    const auto r = static_cast<double>(radius);
    for (std::size_t j = 0; j < size.height; ++j) {
        for (std::size_t i = 0; i < size.width; ++i) {
            const double x = static_cast<double>(i) - r;
            const double y = static_cast<double>(j) - r;
            const double env = std::exp(-(x * x + y * y) / (2.0 * params.sigma * params.sigma));
            kernel(i, j) = env * std::cos(k * (x * nx + y * ny));
        }
    }
    const double mean = kernel.mean();
    double l1 = 0.0;
    for (double& v : kernel.values()) {
        v -= mean;
        l1 += std::abs(v);
    }
    for (double& v : kernel.values()) v /= l1;
    return kernel;
}

GrayMap intensity_feature(const Frame& frame) { return spatial_gradient(frame.intensity()).magnitude(); }

std::vector<GrayMap> color_features(const Frame& frame) {
    std::vector<GrayMap> out;
    out.reserve(3);
    for (const auto& c : frame.channels()) out.push_back(spatial_gradient(c).magnitude());
    return out;
}

namespace {
constexpr double kOrientations[] = {0.0, 45.0, 90.0, 135.0};
}

std::vector<GrayMap> orientation_responses(const Frame& frame, const GaborParams& params) {
    const GrayMap intensity = frame.intensity();
    std::vector<GrayMap> out;
    out.reserve(4);
    for (double angle : kOrientations) out.push_back(filter2d(intensity, gabor_kernel(angle, params)));
    return out;
}

std::vector<GrayMap> orientation_features(const Frame& frame, const GaborParams& params) {
    auto responses = orientation_responses(frame, params);
    for (auto& r : responses) r = spatial_gradient(r).magnitude();
    return responses;
}

FeatureStack basic_stack(const Frame& frame, const GaborParams& params) {
    std::vector<GrayMap> maps;
    maps.reserve(8);
    maps.push_back(intensity_feature(frame));
    for (auto& m : color_features(frame)) maps.push_back(std::move(m));
    for (auto& m : orientation_features(frame, params)) maps.push_back(std::move(m));
    return FeatureStack(FeatureMode::Basic, std::move(maps),
                        {"intensity", "color_r", "color_g", "color_b", "orient_0", "orient_45", "orient_90",
                         "orient_135"});
}

GrayMap combine_equal_weights(const FeatureStack& stack) {
    GrayMap out(stack.raster_size());
    auto dst = out.values();
    for (const auto& m : stack.maps()) {
        auto src = m.values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    const double n = static_cast<double>(stack.size());
    for (double& v : dst) v /= n;
    return out;
}

FeatureStack compute_features(const Frame& frame, FeatureMode mode) {
    return mode == FeatureMode::Basic ? basic_stack(frame) : itti_saliency(frame);
}

}  // namespace gravattn
