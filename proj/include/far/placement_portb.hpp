#pragma once

#include <algorithm>

#include "far/error.hpp"
#include "far/model.hpp"

namespace far {

// min(max(value, lo), hi)
inline double clip(double value, double lo, double hi) {
    if (lo > hi) throw ValidationError("empty interval");
    return std::min(std::max(value, lo), hi);
}

struct PortLocation {
    double y = 0.0;
    double z = 0.0;
    bool operator==(const PortLocation&) const = default;
};

// Port B minimizes its distance to the BS: the projection of (s2, H) onto the
// feasible rectangle. Solved once, independently of port A.
inline PortLocation optimal_port_b(const Scenario& s) {
    return {clip(s.bs_position.y, s.y_bounds.lo, s.y_bounds.hi),
            clip(s.bs_position.z, s.z_bounds.lo, s.z_bounds.hi)};
}

}  // namespace far
