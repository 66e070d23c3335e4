#pragma once

#include "gravattn/features.hpp"
#include "gravattn/scanpath.hpp"

namespace gravattn {

struct WtaConfig {
    double inhibition_radius = 15.0;  // px, ~2 degrees at 7.5 px/deg
    std::size_t num_fixations = 9;
    double fixation_duration = 1.0 / 3.0;  // s

    void validate() const;
};

struct WtaResult {
    Scanpath scanpath;
    /// Fixations emitted at the map centre because the map was exhausted.
    std::size_t fallback_count = 0;
};

/// Winner-take-all baseline: repeatedly pick the global maximum of the
/// equal-weight combination (first in row-major order on ties) and zero a
/// disk of `inhibition_radius` around it.
WtaResult wta_scanpath(const FeatureStack& stack, const WtaConfig& config);
WtaResult wta_scanpath(const GrayMap& map, const WtaConfig& config);

}  // namespace gravattn
