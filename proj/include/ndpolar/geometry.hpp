#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "ndpolar/space.hpp"

namespace ndpolar {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular range [start, end) of one axis, with its center angle. Radians.
struct Sector {
    double start = 0.0;
    double end = 0.0;
    double center = 0.0;
};

/// Radial range [inner, outer) of one level on the unit disk, with its center radius.
struct Ring {
    double inner = 0.0;
    double outer = 0.0;
    double center = 0.0;
};

struct ThresholdArc {
    std::size_t axis = 0;
    double radius = 0.0;
    double start = 0.0;
    double end = 0.0;
};

struct PolarPoint {
    double radius = 0.0;
    double angle = 0.0;
};

struct SegmentIndex {
    std::size_t axis = 0;
    std::size_t level = 0;

    friend bool operator==(SegmentIndex, SegmentIndex) = default;
};

/// Polar embedding of a state space on the unit disk.
struct PolarLayout {
    std::size_t d = 0;
    double theta0 = 0.0;
    double sector_width = 0.0;
    std::vector<Sector> sectors;
    std::vector<std::vector<Ring>> rings;
    std::vector<ThresholdArc> threshold_arcs;
};

/// Axis i takes [theta0 + i*dtheta, theta0 + (i+1)*dtheta) with dtheta = 2pi/d;
/// level l takes radii [l/n, (l+1)/n). Threshold arcs sit at (a+1)/n.
PolarLayout layout(const StateSpace& space, double theta0);

/// Marker position: radius (l + 1/2)/n at the sector center.
PolarPoint locate(const PolarLayout& layout, std::size_t axis, std::size_t level);

/// Segment containing the point under half-open bounds; none when radius >= 1
/// or radius < 0.
std::optional<SegmentIndex> hit_test(const PolarLayout& layout, PolarPoint point);

}  // namespace ndpolar
