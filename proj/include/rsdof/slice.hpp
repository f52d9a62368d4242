#pragma once

#include "rsdof/rational.hpp"
#include "rsdof/region.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rsdof {

/// Exact boundary polygon of a 2D cross-section of the region: all but two
/// coordinates are fixed and the remaining (free_x, free_y) plane is cut out.
/// Vertices are exact rationals, ordered counter-clockwise around the
/// centroid; an empty list means the fixed values leave no feasible slice.
struct SlicePolygon {
    std::size_t free_x = 0;
    std::size_t free_y = 0;
    std::vector<std::array<rational, 2>> vertices;
};

/// fixed[i] must hold a value for exactly K-2 users and be empty for the two
/// free ones.
inline SlicePolygon region_slice(const RegionDescription& region,
                                 const std::vector<std::optional<rational>>& fixed) {
    const std::size_t K = region.user_count();
    if (fixed.size() != K) throw std::invalid_argument("region_slice: fixed-value length mismatch");
    std::vector<std::size_t> free_users;
    for (std::size_t i = 0; i < K; ++i)
        if (!fixed[i]) free_users.push_back(i);
    if (free_users.size() != 2)
        throw std::invalid_argument("region_slice: exactly two coordinates must stay free");

    SlicePolygon slice;
    slice.free_x = free_users[0];
    slice.free_y = free_users[1];

    for (std::size_t i = 0; i < K; ++i)
        if (fixed[i] && *fixed[i] < 0) return slice; // fixed point already infeasible

    // Project every subset bound onto the free plane: cx*x + cy*y <= rhs'.
    struct Line {
        rational cx, cy, rhs;
    };
    std::vector<Line> bounds;
    bounds.push_back({-1, 0, 0}); // x >= 0
    bounds.push_back({0, -1, 0}); // y >= 0
    for (const SubsetConstraint& c : region.constraints) {
        Line line{0, 0, c.rhs};
        for (std::size_t i : c.subset) {
            if (i == slice.free_x)
                line.cx = 1;
            else if (i == slice.free_y)
                line.cy = 1;
            else
                line.rhs -= *fixed[i];
        }
        if (line.cx == 0 && line.cy == 0) {
            if (line.rhs < 0) return slice; // fixed coordinates exceed this bound
            continue;
        }
        bounds.push_back(std::move(line));
    }

    const auto satisfied = [&](const rational& x, const rational& y) {
        for (const Line& line : bounds)
            if (line.cx * x + line.cy * y > line.rhs) return false;
        return true;
    };

    std::vector<std::array<rational, 2>> points;
    for (std::size_t a = 0; a < bounds.size(); ++a)
        for (std::size_t b = a + 1; b < bounds.size(); ++b) {
            const rational det = bounds[a].cx * bounds[b].cy - bounds[a].cy * bounds[b].cx;
            if (det == 0) continue;
            const rational x = (bounds[a].rhs * bounds[b].cy - bounds[a].cy * bounds[b].rhs) / det;
            const rational y = (bounds[a].cx * bounds[b].rhs - bounds[a].rhs * bounds[b].cx) / det;
            if (satisfied(x, y)) points.push_back({x, y});
        }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.empty()) return slice;

    // Counter-clockwise walk around the centroid (ties cannot occur for
    // distinct polygon vertices).
    rational cx = 0, cy = 0;
    for (const auto& p : points) {
        cx += p[0];
        cy += p[1];
    }
    cx /= static_cast<int>(points.size());
    cy /= static_cast<int>(points.size());
    std::sort(points.begin(), points.end(), [&](const auto& p, const auto& q) {
        const double ap = std::atan2(to_double(p[1] - cy), to_double(p[0] - cx));
        const double aq = std::atan2(to_double(q[1] - cy), to_double(q[0] - cx));
        if (ap != aq) return ap < aq;
        return p < q;
    });
    slice.vertices = std::move(points);
    return slice;
}

} // namespace rsdof
