#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "ryd/analysis.hpp"
#include "ryd/protocols.hpp"
#include "ryd/rng.hpp"
#include "ryd/sampler.hpp"
#include "ryd/udg.hpp"

namespace ryd {

// Repairs a measured Rydberg indicator into an independent set: while any
// edge has both endpoints selected, drop a selected vertex of maximum degree
// within the violating induced subgraph (random tie-break).
inline std::vector<std::uint8_t> greedy_remove_violations(std::vector<std::uint8_t> bits,
                                                          const UnitDiskGraph& g,
                                                          std::mt19937_64& rng) {
    if (bits.size() != g.size())
        throw std::invalid_argument("greedy_remove_violations: size mismatch");
    const auto adj = g.adjacency();
    while (true) {
        // degree of each selected vertex counting only selected neighbors
        std::size_t best_deg = 0;
        std::vector<std::size_t> worst;
        for (std::size_t v = 0; v < bits.size(); ++v) {
            if (!bits[v]) continue;
            std::size_t deg = 0;
            for (std::size_t u : adj[v])
                if (bits[u]) ++deg;
            if (deg == 0) continue;
            if (deg > best_deg) {
                best_deg = deg;
                worst.assign(1, v);
            } else if (deg == best_deg) {
                worst.push_back(v);
            }
        }
        if (worst.empty()) return bits;  // independent
        const std::size_t pick =
            worst[static_cast<std::size_t>(canonical_double(rng) * worst.size())];
        bits[pick] = 0;
    }
}

// Extends an independent set to a maximal one: scan vertices in random order,
// adding any vertex with no selected neighbor.
inline std::vector<std::uint8_t> greedy_augment(std::vector<std::uint8_t> is,
                                                const UnitDiskGraph& g, std::mt19937_64& rng) {
    if (is.size() != g.size()) throw std::invalid_argument("greedy_augment: size mismatch");
    const auto adj = g.adjacency();
    std::vector<std::size_t> order(is.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t v : order) {
        if (is[v]) continue;
        bool free = true;
        for (std::size_t u : adj[v])
            if (is[u]) {
                free = false;
                break;
            }
        if (free) is[v] = 1;
    }
    return is;
}

inline bool is_independent(const std::vector<std::uint8_t>& bits, const UnitDiskGraph& g) {
    for (const auto& [i, j] : g.edges())
        if (bits[i] && bits[j]) return false;
    return true;
}

inline bool is_maximal_independent(const std::vector<std::uint8_t>& bits,
                                   const UnitDiskGraph& g) {
    if (!is_independent(bits, g)) return false;
    const auto adj = g.adjacency();
    for (std::size_t v = 0; v < bits.size(); ++v) {
        if (bits[v]) continue;
        bool free = true;
        for (std::size_t u : adj[v])
            if (bits[u]) free = false;
        if (free) return false;
    }
    return true;
}

// Exact maximum independent set by branch and bound over bitmask adjacency:
// isolated and degree-1 candidates are taken greedily (always safe), then the
// search branches on a maximum-degree vertex. Graphs up to 40 vertices.
inline std::pair<int, std::vector<std::uint8_t>> exact_mis(const UnitDiskGraph& g) {
    const std::size_t n = g.size();
    if (n > 40) throw std::length_error("exact_mis: graphs up to 40 vertices only");
    std::vector<std::uint64_t> adj(n, 0);
    for (const auto& [i, j] : g.edges()) {
        adj[i] |= std::uint64_t{1} << j;
        adj[j] |= std::uint64_t{1} << i;
    }
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;

    int best_size = -1;
    std::uint64_t best_set = 0;
    auto popcount = [](std::uint64_t x) { return std::popcount(x); };

    // candidates = vertices still eligible; chosen = vertices in the set
    auto recurse = [&](auto&& self, std::uint64_t candidates, std::uint64_t chosen) -> void {
        // reductions: take isolated and degree-1 vertices outright
        bool reduced = true;
        while (reduced) {
            reduced = false;
            std::uint64_t rest = candidates;
            while (rest) {
                const int v = std::countr_zero(rest);
                rest &= rest - 1;
                const std::uint64_t nb = adj[static_cast<std::size_t>(v)] & candidates;
                const int deg = popcount(nb);
                if (deg == 0) {
                    chosen |= std::uint64_t{1} << v;
                    candidates &= ~(std::uint64_t{1} << v);
                    reduced = true;
                } else if (deg == 1) {
                    // taking a degree-1 vertex is never worse than taking
                    // its sole competing neighbor
                    chosen |= std::uint64_t{1} << v;
                    candidates &= ~((std::uint64_t{1} << v) | nb);
                    reduced = true;
                    break;  // adjacency degrees changed; rescan
                }
            }
        }
        if (!candidates) {
            const int size = popcount(chosen);
            if (size > best_size) {
                best_size = size;
                best_set = chosen;
            }
            return;
        }
        if (popcount(chosen) + popcount(candidates) <= best_size) return;  // bound

        // branch on a maximum-degree candidate: either exclude it...
        int pivot = -1, max_deg = -1;
        std::uint64_t rest = candidates;
        while (rest) {
            const int v = std::countr_zero(rest);
            rest &= rest - 1;
            const int deg = popcount(adj[static_cast<std::size_t>(v)] & candidates);
            if (deg > max_deg) {
                max_deg = deg;
                pivot = v;
            }
        }
        const std::uint64_t pbit = std::uint64_t{1} << pivot;
        // ...or include it and discard its neighborhood.
        self(self, candidates & ~(pbit | adj[static_cast<std::size_t>(pivot)]), chosen | pbit);
        self(self, candidates & ~pbit, chosen);
    };
    recurse(recurse, all, 0);

    std::vector<std::uint8_t> witness(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (best_set & (std::uint64_t{1} << v)) witness[v] = 1;
    return {best_size, witness};
}

// Per-detuning summary of the annealing + greedy-repair pipeline.
struct MisReport {
    double delta_f = 0.0;       // rad/us, final detuning of the sweep
    double avg_rydberg = 0.0;   // mean raw Rydberg count per kept shot
    double avg_repaired = 0.0;  // mean independent-set size after repair
    double avg_maximal = 0.0;   // mean maximal-IS size after augmentation
    int best = 0;               // largest maximal IS seen
    std::vector<std::uint8_t> best_set;
    int shots_used = 0;         // shots surviving post-selection
    std::optional<int> exact;   // exact MIS size when the oracle ran
};

// Post-processing rounds per shot: each round re-runs repair + augment with
// fresh tie-break randomness and the best result is kept.
inline constexpr int mis_postprocess_rounds = 10;

namespace detail {

// Applies repair + augmentation rounds to one measured bitstring.
inline void postprocess_shot(const std::vector<std::uint8_t>& rydberg_bits,
                             const UnitDiskGraph& g, std::mt19937_64& rng, int rounds,
                             MisReport& report) {
    int best_repaired = -1, best_maximal = -1;
    std::vector<std::uint8_t> best_bits;
    for (int round = 0; round < rounds; ++round) {
        const auto repaired = greedy_remove_violations(rydberg_bits, g, rng);
        const auto maximal = greedy_augment(repaired, g, rng);
        const int rep_size = static_cast<int>(std::count(repaired.begin(), repaired.end(), 1));
        const int max_size = static_cast<int>(std::count(maximal.begin(), maximal.end(), 1));
        if (max_size > best_maximal) {
            best_maximal = max_size;
            best_bits = maximal;
        }
        best_repaired = std::max(best_repaired, rep_size);
    }
    report.avg_rydberg +=
        static_cast<double>(std::count(rydberg_bits.begin(), rydberg_bits.end(), 1));
    report.avg_repaired += best_repaired;
    report.avg_maximal += best_maximal;
    if (best_maximal > report.best) {
        report.best = best_maximal;
        report.best_set = best_bits;
    }
    report.shots_used += 1;
}

inline void finalize_report(MisReport& report) {
    if (report.shots_used > 0) {
        report.avg_rydberg /= report.shots_used;
        report.avg_repaired /= report.shots_used;
        report.avg_maximal /= report.shots_used;
    }
}

}  // namespace detail

// Standard annealing schedule for MIS on a unit-disk register: drive plateau
// at Ω=15 while Δ sweeps −30 → delta_f, shaped like the adiabatic protocol.
inline AnalogProgram mis_program(const UnitDiskGraph& g, double delta_f) {
    return build_adiabatic(g.to_register(), 15.0, -30.0, delta_f, 0.5, 3.0, 4.0);
}

// Anneal the graph's register at each final detuning, post-select, repair and
// augment every kept shot, and summarize. Runs the exact oracle once when the
// graph is small enough.
inline std::vector<MisReport> detuning_scan(const UnitDiskGraph& g,
                                            const std::vector<double>& delta_f_grid, int shots,
                                            const std::optional<NoiseParams>& noise,
                                            std::uint64_t seed,
                                            const IntegratorConfig& cfg = {4e-3, 1e-10}) {
    std::optional<int> exact;
    if (g.size() <= 40) exact = exact_mis(g).first;
    std::vector<MisReport> reports;
    for (std::size_t k = 0; k < delta_f_grid.size(); ++k) {
        const double delta_f = delta_f_grid[k];
        const AnalogProgram prog = mis_program(g, delta_f);
        const std::uint64_t point_seed = mix64(seed, k);
        const TaskResult result = run_task(prog, shots, noise, point_seed, false, cfg);

        MisReport report;
        report.delta_f = delta_f;
        report.exact = exact;
        std::vector<ShotRecord> kept;
        try {
            kept = post_select(result);
        } catch (const EmptySelectionError&) {
            reports.push_back(report);  // all zeros, shots_used = 0
            continue;
        }
        auto rng = substream(point_seed, 0, StreamTag::postproc);
        for (const auto& shot : kept) {
            std::vector<std::uint8_t> rydberg(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                rydberg[i] = shot.post_sequence[i] ? 0 : 1;
            detail::postprocess_shot(rydberg, g, rng, mis_postprocess_rounds, report);
        }
        detail::finalize_report(report);
        reports.push_back(std::move(report));
    }
    return reports;
}

// The classically sampleable baseline: the same post-processing applied to
// the all-zeros string, i.e. pure randomized greedy construction.
inline MisReport classical_baseline(const UnitDiskGraph& g, int shots, std::uint64_t seed) {
    MisReport report;
    if (g.size() <= 40) report.exact = exact_mis(g).first;
    const std::vector<std::uint8_t> zeros(g.size(), 0);
    auto rng = substream(seed, 0, StreamTag::postproc);
    for (int s = 0; s < shots; ++s)
        detail::postprocess_shot(zeros, g, rng, mis_postprocess_rounds, report);
    detail::finalize_report(report);
    return report;
}

// Average maximal-IS size of the hybrid pipeline over the classical baseline.
inline double performance_ratio(const MisReport& hybrid, const MisReport& classical) {
    if (!(classical.avg_maximal > 0))
        throw std::domain_error("performance_ratio: classical baseline found nothing");
    return hybrid.avg_maximal / classical.avg_maximal;
}

}  // namespace ryd
