#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ryd {

struct Vec2 {
    double x = 0.0;  // um
    double y = 0.0;  // um
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// One trap site of the user-specified pattern. `filled` marks sites the user
// asks to be loaded with an atom; unfilled sites exist only as geometry.
struct Site {
    double x = 0.0;  // um
    double y = 0.0;  // um
    bool filled = true;
    Vec2 pos() const { return {x, y}; }
    friend bool operator==(const Site&, const Site&) = default;
};

// Ordered collection of sites. The site order fixes the bit order of every
// bitstring downstream (basis configurations, pre/post sequences).
struct Register {
    std::vector<Site> sites;

    Register() = default;
    explicit Register(std::vector<Site> s) : sites(std::move(s)) {}

    static Register from_positions(const std::vector<Vec2>& pos, bool filled = true) {
        Register r;
        r.sites.reserve(pos.size());
        for (const auto& p : pos) r.sites.push_back({p.x, p.y, filled});
        return r;
    }

    std::size_t size() const { return sites.size(); }
    bool empty() const { return sites.empty(); }

    std::size_t filled_count() const {
        return static_cast<std::size_t>(
            std::count_if(sites.begin(), sites.end(), [](const Site& s) { return s.filled; }));
    }

    std::vector<std::size_t> filled_indices() const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < sites.size(); ++i)
            if (sites[i].filled) idx.push_back(i);
        return idx;
    }

    std::vector<Vec2> positions() const {
        std::vector<Vec2> p;
        p.reserve(sites.size());
        for (const auto& s : sites) p.push_back(s.pos());
        return p;
    }

    double site_distance(std::size_t i, std::size_t j) const {
        return distance(sites[i].pos(), sites[j].pos());
    }

    friend bool operator==(const Register&, const Register&) = default;
};

// nx x ny translated copies of `sub` in row-major order; copy (i, j) is offset
// by (i*dx, j*dy). Spacing large enough to respect minimum distances is the
// caller's concern (validate checks it).
inline Register tile(const Register& sub, std::size_t nx, std::size_t ny, double dx, double dy) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("tile: nx and ny must be >= 1");
    Register out;
    out.sites.reserve(sub.size() * nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            for (const auto& s : sub.sites)
                out.sites.push_back({s.x + static_cast<double>(i) * dx,
                                     s.y + static_cast<double>(j) * dy, s.filled});
    return out;
}

// Greedy 1D clustering of y values into hardware rows. Scanning y ascending,
// a new row opens whenever the next y is at least `min_row_gap` above the
// current row's anchor (the first y assigned to the row); every point's y is
// replaced by its row anchor. x coordinates are untouched.
inline Register snap_to_rows(const std::vector<Vec2>& points, double min_row_gap) {
    if (points.empty()) throw std::invalid_argument("snap_to_rows: no points");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a].y < points[b].y; });

    std::vector<double> snapped(points.size());
    double anchor = points[order.front()].y;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double y = points[order[k]].y;
        if (y - anchor >= min_row_gap) anchor = y;
        snapped[order[k]] = anchor;
    }

    Register out;
    out.sites.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out.sites.push_back({points[i].x, snapped[i], true});
    return out;
}

}  // namespace ryd
