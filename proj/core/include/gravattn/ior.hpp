#pragma once

#include "gravattn/imaging.hpp"

namespace gravattn {

/// Inhibition-of-return parameters. `beta` is a rate per second of model
/// time, `sigma` the Gaussian footprint in pixels.
struct IorParams {
    double beta = 0.1;
    double sigma = 14.0;
    bool enabled = true;

    void validate() const;
};

/// I(x, t) in [0, 1] on the retina grid.
class InhibitionMap {
public:
    InhibitionMap() = default;
    /// Zero inhibition everywhere.
    explicit InhibitionMap(Size size) : values_(size, 0.0) {}
    /// Throws ConfigError if any value lies outside [0, 1].
    explicit InhibitionMap(GrayMap values);

    const GrayMap& values() const { return values_; }
    Size size() const { return values_.size(); }
    double operator()(std::size_t x, std::size_t y) const { return values_(x, y); }

private:
    GrayMap values_;
};

/// g(u) = exp(-|u|^2 / (2 sigma^2)) sampled at pixel centres around `focus`.
GrayMap inhibition_footprint(Size size, const Vec2& focus, double sigma);

/// Exact solution of dI/dt + beta I = beta g(x - a) over `dt` seconds with
/// the focus `a` held fixed: I' = I e^{-beta dt} + (1 - e^{-beta dt}) g.
InhibitionMap ior_step(const InhibitionMap& current, const Vec2& focus, double dt, const IorParams& params);

}  // namespace gravattn
