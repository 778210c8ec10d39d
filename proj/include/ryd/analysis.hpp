#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ryd/fit.hpp"
#include "ryd/geometry.hpp"
#include "ryd/sampler.hpp"

namespace ryd {

class EmptySelectionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shots whose pre_sequence reports every user-requested site as filled.
// Partially-loaded shots are dropped, never imputed. Throws when nothing
// survives so downstream statistics cannot silently run on zero shots.
inline std::vector<ShotRecord> post_select(const TaskResult& result) {
    std::vector<ShotRecord> kept;
    for (const auto& shot : result.shots) {
        bool full = true;
        for (std::size_t i = 0; i < result.program.reg.size() && full; ++i)
            if (result.program.reg.sites[i].filled && !shot.pre_sequence[i]) full = false;
        if (full) kept.push_back(shot);
    }
    if (kept.empty())
        throw EmptySelectionError("post_select: no shot had a completely filled register");
    return kept;
}

// Fraction of Rydberg outcomes (post_sequence 0 = atom absent = Rydberg)
// among site readings whose pre_sequence reported a filled trap.
inline double rydberg_fraction(const std::vector<ShotRecord>& shots) {
    if (shots.empty()) throw std::invalid_argument("rydberg_fraction: no shots");
    std::uint64_t rydberg = 0, total = 0;
    for (const auto& shot : shots)
        for (std::size_t i = 0; i < shot.pre_sequence.size(); ++i) {
            if (!shot.pre_sequence[i]) continue;
            ++total;
            if (!shot.post_sequence[i]) ++rydberg;
        }
    if (total == 0) throw std::invalid_argument("rydberg_fraction: no filled site readings");
    return static_cast<double>(rydberg) / static_cast<double>(total);
}

// Per-site mean Rydberg occupation over shots where that site was filled.
// A site that was never reported filled has no estimate and yields NaN.
inline std::vector<double> density_map(const std::vector<ShotRecord>& shots) {
    if (shots.empty()) throw std::invalid_argument("density_map: no shots");
    const std::size_t n = shots.front().pre_sequence.size();
    std::vector<double> rydberg(n, 0.0), total(n, 0.0);
    for (const auto& shot : shots)
        for (std::size_t i = 0; i < n; ++i) {
            if (!shot.pre_sequence[i]) continue;
            total[i] += 1.0;
            if (!shot.post_sequence[i]) rydberg[i] += 1.0;
        }
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = total[i] > 0 ? rydberg[i] / total[i] : std::numeric_limits<double>::quiet_NaN();
    return d;
}

// Empirical probability of an exact post_sequence (presence-bit target) with
// its binomial standard error sqrt(p(1-p)/n).
inline std::pair<double, double> bitstring_probability(const std::vector<ShotRecord>& shots,
                                                       const std::vector<std::uint8_t>& target) {
    if (shots.empty()) throw std::invalid_argument("bitstring_probability: no shots");
    std::uint64_t hits = 0;
    for (const auto& shot : shots)
        if (shot.post_sequence == target) ++hits;
    const auto n = static_cast<double>(shots.size());
    const double p = static_cast<double>(hits) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

// Connected two-point correlations C_ij = ⟨n_i n_j⟩ − ⟨n_i⟩⟨n_j⟩ along a
// chain, where n = 1 − post_sequence is the Rydberg indicator and averages
// are exact sample moments over the given (post-selected) shots.
// chain_order maps matrix row k to register site chain_order[k].
inline Eigen::MatrixXd connected_correlation_1d(const std::vector<ShotRecord>& shots,
                                                const std::vector<int>& chain_order) {
    if (shots.size() < 2)
        throw InsufficientDataError("connected_correlation_1d: need at least 2 shots");
    const auto n = static_cast<Eigen::Index>(chain_order.size());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd occ(n);
    for (const auto& shot : shots) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto site = static_cast<std::size_t>(chain_order[static_cast<std::size_t>(k)]);
            occ[k] = shot.post_sequence[site] ? 0.0 : 1.0;
        }
        mean += occ;
        second += occ * occ.transpose();
    }
    const double m = static_cast<double>(shots.size());
    mean /= m;
    second /= m;
    return second - mean * mean.transpose();
}

// Integer lattice coordinates for a register laid out on a rectangular grid.
// Throws when positions do not sit on one (within 1e-6 um).
inline std::vector<std::pair<int, int>> lattice_coords(const Register& reg) {
    if (reg.empty()) throw std::invalid_argument("lattice_coords: empty register");
    auto axis_coords = [](std::vector<double> vals) {
        std::sort(vals.begin(), vals.end());
        std::vector<double> levels;
        for (double v : vals)
            if (levels.empty() || v - levels.back() > 1e-6) levels.push_back(v);
        double pitch = 0.0;
        for (std::size_t i = 1; i < levels.size(); ++i) {
            const double gap = levels[i] - levels[i - 1];
            pitch = pitch == 0.0 ? gap : std::min(pitch, gap);
        }
        return std::pair{levels.front(), pitch};
    };
    std::vector<double> xs, ys;
    for (const auto& s : reg.sites) {
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
    const auto [x0, px] = axis_coords(xs);
    const auto [y0, py] = axis_coords(ys);
    std::vector<std::pair<int, int>> coords;
    for (const auto& s : reg.sites) {
        const double fx = px > 0 ? (s.x - x0) / px : 0.0;
        const double fy = py > 0 ? (s.y - y0) / py : 0.0;
        const double rx = std::round(fx), ry = std::round(fy);
        if (std::abs(fx - rx) > 1e-6 || std::abs(fy - ry) > 1e-6)
            throw std::invalid_argument("lattice_coords: register is not a rectangular lattice");
        coords.emplace_back(static_cast<int>(rx), static_cast<int>(ry));
    }
    return coords;
}

// Displacement-averaged connected correlations on a 2D lattice:
//   G²(k,l) = (1/N_(k,l)) Σ_{ij: coord_j − coord_i = (k,l)} (⟨n_i n_j⟩ − ⟨n_i⟩⟨n_j⟩).
// G²(0,0) is the mean on-site variance.
inline std::map<std::pair<int, int>, double> connected_correlation_2d(
    const std::vector<ShotRecord>& shots, const std::vector<std::pair<int, int>>& coords) {
    if (shots.size() < 2)
        throw InsufficientDataError("connected_correlation_2d: need at least 2 shots");
    const std::size_t n = coords.size();
    std::vector<double> mean(n, 0.0);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(n));
    Eigen::VectorXd occ(static_cast<Eigen::Index>(n));
    for (const auto& shot : shots) {
        for (std::size_t i = 0; i < n; ++i) occ[static_cast<Eigen::Index>(i)] =
            shot.post_sequence[i] ? 0.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) mean[i] += occ[static_cast<Eigen::Index>(i)];
        second += occ * occ.transpose();
    }
    const double m = static_cast<double>(shots.size());
    for (auto& v : mean) v /= m;
    second /= m;

    std::map<std::pair<int, int>, double> sum;
    std::map<std::pair<int, int>, int> count;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::pair<int, int> d{coords[j].first - coords[i].first,
                                        coords[j].second - coords[i].second};
            sum[d] += second(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                      mean[i] * mean[j];
            count[d] += 1;
        }
    std::map<std::pair<int, int>, double> g2;
    for (const auto& [d, s] : sum) g2[d] = s / count[d];
    return g2;
}

}  // namespace ryd
