#include "gravattn/wta.hpp"

#include <cmath>
#include <string>

#include "gravattn/error.hpp"

namespace gravattn {

void WtaConfig::validate() const {
    if (!(inhibition_radius > 0.0)) throw ConfigError("wta.inhibition_radius must be positive");
    if (num_fixations < 1) throw ConfigError("wta.num_fixations must be at least 1");
    if (!(fixation_duration > 0.0)) throw ConfigError("wta.fixation_duration must be positive");
}

WtaResult wta_scanpath(const FeatureStack& stack, const WtaConfig& config) {
    if (stack.mode() == FeatureMode::Itti) return wta_scanpath(stack.maps().front(), config);
    return wta_scanpath(combine_equal_weights(stack), config);
}

WtaResult wta_scanpath(const GrayMap& map_in, const WtaConfig& config) {
    config.validate();
    if (map_in.empty()) throw ConfigError("wta_scanpath: empty map");
    GrayMap map = map_in;
    const std::size_t w = map.width(), h = map.height();
    const double r = config.inhibition_radius;
    const double r2 = r * r;
    const Vec2 centre = retina_center(map.size());

    WtaResult out;
    for (std::size_t k = 0; k < config.num_fixations; ++k) {
        std::size_t best = 0;
        const auto vals = map.values();
        for (std::size_t i = 1; i < vals.size(); ++i) {
            if (vals[i] > vals[best]) best = i;
        }
        const double t0 = static_cast<double>(k) * config.fixation_duration;
        const double t1 = static_cast<double>(k + 1) * config.fixation_duration;
        if (!(vals[best] > 0.0)) {
            out.scanpath.fixations.push_back({centre.x, centre.y, t0, t1});
            ++out.fallback_count;
            continue;
        }
        const std::size_t bx = best % w, by = best / w;
        out.scanpath.fixations.push_back({static_cast<double>(bx), static_cast<double>(by), t0, t1});

        const auto span = static_cast<std::ptrdiff_t>(std::ceil(r));
        for (std::ptrdiff_t dy = -span; dy <= span; ++dy) {
            const auto y = static_cast<std::ptrdiff_t>(by) + dy;
            if (y < 0 || y >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::ptrdiff_t dx = -span; dx <= span; ++dx) {
                const auto x = static_cast<std::ptrdiff_t>(bx) + dx;
                if (x < 0 || x >= static_cast<std::ptrdiff_t>(w)) continue;
                if (static_cast<double>(dx * dx + dy * dy) < r2) {
                    map(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = 0.0;
                }
            }
        }
    }
    return out;
}

}  // namespace gravattn
