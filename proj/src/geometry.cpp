#include "ndpolar/geometry.hpp"

#include <cmath>

#include "ndpolar/error.hpp"

namespace ndpolar {

PolarLayout layout(const StateSpace& space, double theta0)
{
    PolarLayout out;
    out.d = space.dims();
    out.theta0 = theta0;
    out.sector_width = kTwoPi / static_cast<double>(out.d);
    for (std::size_t i = 0; i < out.d; ++i) {
        const double start = theta0 + static_cast<double>(i) * out.sector_width;
        const double end = theta0 + static_cast<double>(i + 1) * out.sector_width;
        out.sectors.push_back({start, end, theta0 + (static_cast<double>(i) + 0.5) * out.sector_width});

        const Axis& axis = space.axis(i);
        const double n = static_cast<double>(axis.size());
        std::vector<Ring> rings;
        for (std::size_t l = 0; l < axis.size(); ++l) {
            const double lv = static_cast<double>(l);
            rings.push_back({lv / n, (lv + 1.0) / n, (lv + 0.5) / n});
        }
        out.rings.push_back(std::move(rings));

        if (axis.threshold) {
            out.threshold_arcs.push_back({i, (static_cast<double>(*axis.threshold) + 1.0) / n, start, end});
        }
    }
    return out;
}

PolarPoint locate(const PolarLayout& layout, std::size_t axis, std::size_t level)
{
    if (axis >= layout.d) {
        throw Error(ErrorCode::out_of_range, "axis " + std::to_string(axis) + " outside layout");
    }
    if (level >= layout.rings[axis].size()) {
        throw Error(ErrorCode::out_of_range, "level " + std::to_string(level) + " outside axis " + std::to_string(axis));
    }
    return {layout.rings[axis][level].center, layout.sectors[axis].center};
}

std::optional<SegmentIndex> hit_test(const PolarLayout& layout, PolarPoint point)
{
    if (!(point.radius >= 0.0) || point.radius >= 1.0 || !std::isfinite(point.angle) || layout.d == 0) {
        return std::nullopt;
    }
    // Reduce into [theta0, theta0 + 2pi) without disturbing angles already inside,
    // so a point exactly on a stored start angle compares equal to it.
    double a = point.angle;
    const double lo = layout.theta0;
    const double hi = layout.theta0 + kTwoPi;
    if (a < lo || a >= hi) {
        a = lo + std::fmod(a - lo, kTwoPi);
        while (a < lo) a += kTwoPi;
        while (a >= hi) a -= kTwoPi;
    }
    std::size_t axis = 0;
    for (std::size_t i = 0; i < layout.d; ++i) {
        if (layout.sectors[i].start <= a) {
            axis = i;
        }
    }
    const auto& rings = layout.rings[axis];
    std::size_t level = 0;
    for (std::size_t l = 0; l < rings.size(); ++l) {
        if (rings[l].inner <= point.radius) {
            level = l;
        }
    }
    return SegmentIndex{axis, level};
}

}  // namespace ndpolar
