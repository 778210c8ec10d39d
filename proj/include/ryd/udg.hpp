#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ryd/geometry.hpp"
#include "ryd/rng.hpp"

namespace ryd {

// Geometric graph: vertices are positions, edges exactly the pairs closer
// than `radius`.
struct UnitDiskGraph {
    std::vector<Vec2> positions;
    double radius = 0.0;  // um

    std::size_t size() const { return positions.size(); }

    bool adjacent(std::size_t i, std::size_t j) const {
        return i != j && distance(positions[i], positions[j]) < radius;
    }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (adjacent(i, j)) e.emplace_back(i, j);
        return e;
    }

    std::vector<std::vector<std::size_t>> adjacency() const {
        std::vector<std::vector<std::size_t>> adj(size());
        for (const auto& [i, j] : edges()) {
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
        return adj;
    }

    Register to_register() const { return Register::from_positions(positions); }
};

// n×m King's-move lattice at `pitch`, with every vertex independently dropped
// with probability `dropout`. The default radius pitch·√2·1.01 makes edges
// exactly the horizontal, vertical, and diagonal nearest neighbors.
inline UnitDiskGraph kings_graph(int n, int m, double pitch, double dropout, std::uint64_t seed,
                                 double radius = 0.0) {
    if (n < 1 || m < 1) throw std::invalid_argument("kings_graph: grid must be at least 1x1");
    if (!(pitch > 0)) throw std::invalid_argument("kings_graph: pitch must be positive");
    UnitDiskGraph g;
    g.radius = radius > 0 ? radius : pitch * std::sqrt(2.0) * 1.01;
    auto rng = task_stream(seed, StreamTag::fill);
    for (int row = 0; row < m; ++row)
        for (int col = 0; col < n; ++col)
            if (canonical_double(rng) >= dropout)
                g.positions.push_back({col * pitch, row * pitch});
    return g;
}

}  // namespace ryd
