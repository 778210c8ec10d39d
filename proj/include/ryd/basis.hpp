#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ryd/interaction.hpp"
#include "ryd/program.hpp"

namespace ryd {

enum class BasisMode { full, blockade_truncated };

inline constexpr std::size_t max_full_basis_sites = 24;
inline constexpr std::size_t max_truncated_basis_sites = 40;
// Memory guard: no basis may exceed the full-basis worst case of 2^24 states.
inline constexpr std::size_t max_basis_dim = std::size_t{1} << 24;

// Ordered set of n-qubit configurations the engine evolves over. Bit 1 means
// Rydberg. Site i owns bit (n_sites-1-i), so ascending configuration codes
// read as lexicographically ordered bitstrings (site 0 leftmost).
struct BasisSet {
    int n_sites = 0;
    BasisMode mode = BasisMode::full;
    double cutoff = std::numeric_limits<double>::infinity();  // rad/us, truncated mode only
    std::vector<std::uint64_t> states;                        // strictly ascending

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::size_t dim() const { return states.size(); }

    std::uint64_t site_bit(int site) const { return std::uint64_t{1} << (n_sites - 1 - site); }

    bool excited(std::uint64_t config, int site) const { return (config & site_bit(site)) != 0; }

    // Position of `config` in `states`, or npos if truncation removed it.
    // Full mode indexes directly; truncated mode binary-searches.
    std::size_t index_of(std::uint64_t config) const {
        if (mode == BasisMode::full) return static_cast<std::size_t>(config);
        auto it = std::lower_bound(states.begin(), states.end(), config);
        if (it == states.end() || *it != config) return npos;
        return static_cast<std::size_t>(it - states.begin());
    }

    std::string bitstring(std::uint64_t config) const {
        std::string s(static_cast<std::size_t>(n_sites), '0');
        for (int i = 0; i < n_sites; ++i)
            if (excited(config, i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    // Per-site 0/1 array, index i = site i.
    std::vector<std::uint8_t> to_bits(std::uint64_t config) const {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_sites));
        for (int i = 0; i < n_sites; ++i)
            bits[static_cast<std::size_t>(i)] = excited(config, i) ? 1 : 0;
        return bits;
    }

    std::uint64_t from_bits(const std::vector<std::uint8_t>& bits) const {
        std::uint64_t c = 0;
        for (int i = 0; i < n_sites; ++i)
            if (bits[static_cast<std::size_t>(i)]) c |= site_bit(i);
        return c;
    }

    friend bool operator==(const BasisSet&, const BasisSet&) = default;
};

// All 2^n configurations in ascending order.
inline BasisSet full_basis(int n_sites) {
    if (n_sites < 0) throw std::invalid_argument("full_basis: negative site count");
    if (static_cast<std::size_t>(n_sites) > max_full_basis_sites)
        throw std::length_error("full_basis: site count exceeds the cap of " +
                                std::to_string(max_full_basis_sites));
    BasisSet b;
    b.n_sites = n_sites;
    b.mode = BasisMode::full;
    b.states.resize(std::size_t{1} << n_sites);
    for (std::size_t c = 0; c < b.states.size(); ++c) b.states[c] = c;
    return b;
}

// Configurations with no simultaneously excited pair coupled stronger than
// `cutoff`. Built by depth-first extension site by site — a branch that would
// co-excite a blocked pair is never entered — which emits states in ascending
// order directly. Always contains the all-ground configuration.
inline BasisSet blockade_basis(const Eigen::MatrixXd& v, double cutoff) {
    const int n = static_cast<int>(v.rows());
    if (v.rows() != v.cols()) throw std::invalid_argument("blockade_basis: V must be square");
    if (static_cast<std::size_t>(n) > max_truncated_basis_sites)
        throw std::length_error("blockade_basis: site count exceeds the cap of " +
                                std::to_string(max_truncated_basis_sites));
    BasisSet b;
    b.n_sites = n;
    b.mode = BasisMode::blockade_truncated;
    b.cutoff = cutoff;

    // blocked[i] = bit mask of sites that may not be excited together with i
    std::vector<std::uint64_t> blocked(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && v(i, j) > cutoff) blocked[static_cast<std::size_t>(i)] |= b.site_bit(j);

    // Iterative DFS over sites in order; trying bit 0 before bit 1 at each
    // site yields ascending configuration codes.
    struct Frame {
        int site;
        std::uint64_t config;
    };
    std::vector<Frame> stack{{0, 0}};
    while (!stack.empty()) {
        auto [site, config] = stack.back();
        stack.pop_back();
        if (site == n) {
            if (b.states.size() >= max_basis_dim)
                throw std::length_error("blockade_basis: dimension exceeds the cap of " +
                                        std::to_string(max_basis_dim));
            b.states.push_back(config);
            continue;
        }
        // Excited branch pushed first so the ground branch is processed first.
        if ((config & blocked[static_cast<std::size_t>(site)]) == 0)
            stack.push_back({site + 1, config | b.site_bit(site)});
        stack.push_back({site + 1, config});
    }
    std::sort(b.states.begin(), b.states.end());
    return b;
}

// Default truncation cutoff: comfortably above every drive scale the program
// reaches, so only pairs whose interaction dwarfs the drive are excluded.
inline double default_blockade_cutoff(const AnalogProgram& prog) {
    return 2.5 * std::max(prog.omega.max_abs(), prog.delta.max_abs());
}

// Basis over every site of `reg` (callers evolve registers whose sites are
// all real atoms; vacancy handling happens upstream in the sampler).
inline BasisSet build_basis(const Register& reg, BasisMode mode,
                            double cutoff = std::numeric_limits<double>::infinity(),
                            double c6 = aquila_capabilities().c6) {
    const int n = static_cast<int>(reg.size());
    if (mode == BasisMode::full) return full_basis(n);
    return blockade_basis(interaction_matrix(reg, c6), cutoff);
}

}  // namespace ryd
