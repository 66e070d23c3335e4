#pragma once

#include <vector>

#include "gravattn/geometry.hpp"

namespace gravattn {

struct Fixation {
    double x = 0.0;  // px
    double y = 0.0;  // px
    double t_start = 0.0;  // s
    double t_end = 0.0;    // s

    Vec2 position() const { return {x, y}; }
    friend bool operator==(const Fixation&, const Fixation&) = default;
};

/// Time-ordered, non-overlapping fixations.
struct Scanpath {
    std::vector<Fixation> fixations;

    std::size_t size() const { return fixations.size(); }
    bool empty() const { return fixations.empty(); }
    friend bool operator==(const Scanpath&, const Scanpath&) = default;
};

}  // namespace gravattn
