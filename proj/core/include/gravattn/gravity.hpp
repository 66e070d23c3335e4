#pragma once

#include <cstdint>
#include <vector>

#include "gravattn/features.hpp"
#include "gravattn/imaging.hpp"
#include "gravattn/ior.hpp"

namespace gravattn {

/// Radius (px) inside which the attraction kernel is switched off.
inline constexpr double kCoreRadius = 0.5;

/// Per-feature gains alpha_i and an overall magnitude knob.
struct GravityParams {
    std::vector<double> alphas;  // empty = all ones
    double global_gain = 1.0;

    /// Gain for feature `i`.
    double alpha(std::size_t i) const { return alphas.empty() ? 1.0 : alphas.at(i); }
    void validate(std::size_t feature_count) const;
};

/// Non-negative attractor density on the pixel grid (unit cell area).
class MassField {
public:
    MassField() = default;
    explicit MassField(GrayMap values);

    const GrayMap& values() const { return values_; }
    Size size() const { return values_.size(); }
    double total() const { return values_.sum(); }
    /// FNV-1a over the raw values; identifies the source of a FieldGrid.
    std::uint64_t hash() const;

private:
    GrayMap values_;
};

/// Field E sampled at every pixel centre.
struct FieldGrid {
    VectorField field;
    std::uint64_t source_hash = 0;
};

/// mu(x) = gain * sum_i alpha_i s_i(x) * (1 - I(x)).
MassField mass_from_features(const FeatureStack& stack, const GravityParams& params,
                             const InhibitionMap& inhibition);

/// e(z) = z / (2 pi |z|^2), zero inside the core radius.
Vec2 kernel_e(const Vec2& z);

/// E(a) = -sum_x e(a - x) mu(x) by direct summation; `a` is clamped to the
/// retina.
Vec2 field_at_point(const MassField& mass, const Vec2& a);

/// V(a) = (2 pi)^-1 sum_x log(max(|a - x|, core)) mu(x), so that E = -grad V.
double potential_at_point(const MassField& mass, const Vec2& a);

/// E at all pixel centres through zero-padded FFT convolution.
FieldGrid field_grid(const MassField& mass);

/// Bilinear interpolation of the grid; positions are clamped to the retina.
Vec2 field_interp(const FieldGrid& grid, const Vec2& a);

}  // namespace gravattn
