#include "gravattn/ior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gravattn/error.hpp"

namespace gravattn {

void IorParams::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("ior.beta must lie in (0,1), got " + std::to_string(beta));
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("ior.sigma must be positive");
}

InhibitionMap::InhibitionMap(GrayMap values) : values_(std::move(values)) {
    for (double v : values_.values()) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("InhibitionMap: value outside [0,1]");
    }
}

GrayMap inhibition_footprint(Size size, const Vec2& focus, double sigma) {
    GrayMap g(size);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    // exp(-(dx^2+dy^2)/2s^2) factorises into a row and a column term.
    std::vector<double> gx(size.width), gy(size.height);
    for (std::size_t x = 0; x < size.width; ++x) {
        const double d = static_cast<double>(x) - focus.x;
        gx[x] = std::exp(-d * d * inv);
    }
    for (std::size_t y = 0; y < size.height; ++y) {
        const double d = static_cast<double>(y) - focus.y;
        gy[y] = std::exp(-d * d * inv);
    }
    for (std::size_t y = 0; y < size.height; ++y) {
        for (std::size_t x = 0; x < size.width; ++x) g(x, y) = gx[x] * gy[y];
    }
    return g;
}

InhibitionMap ior_step(const InhibitionMap& current, const Vec2& focus, double dt, const IorParams& params) {
    if (!(dt > 0.0)) throw ConfigError("ior_step: dt must be positive, got " + std::to_string(dt));
    const double keep = std::exp(-params.beta * dt);
    const double gain = -std::expm1(-params.beta * dt);
    GrayMap next = inhibition_footprint(current.size(), focus, params.sigma);
    auto dst = next.values();
    auto src = current.values().values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = std::clamp(src[i] * keep + gain * dst[i], 0.0, 1.0);
    }
    return InhibitionMap(std::move(next));
}

}  // namespace gravattn
