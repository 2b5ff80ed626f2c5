#pragma once

#include "morphkit/types.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <utility>

namespace morphkit::detail {

/// Some pair (i < j) of points closer than or at `tol`, if any. Sort-and-sweep on x.
inline std::optional<std::pair<std::size_t, std::size_t>> find_coincident_pair(std::span<const Point> pts,
                                                                               double tol) {
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && a < b);
    });
    for (std::size_t s = 0; s < order.size(); ++s) {
        for (std::size_t t = s + 1; t < order.size(); ++t) {
            if (pts[order[t]].x() - pts[order[s]].x() > tol) break;
            if ((pts[order[t]] - pts[order[s]]).norm() <= tol)
                return std::make_pair(std::min(order[s], order[t]), std::max(order[s], order[t]));
        }
    }
    return std::nullopt;
}

inline double bbox_diagonal(std::span<const Point> pts) {
    if (pts.empty()) return 0.0;
    Point lo = pts.front();
    Point hi = pts.front();
    for (const Point& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

} // namespace morphkit::detail
