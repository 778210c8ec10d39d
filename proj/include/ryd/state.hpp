#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ryd/basis.hpp"
#include "ryd/rng.hpp"

namespace ryd {

// Complex amplitudes over a shared basis. States returned by the engine are
// L2-normalized to within 1e-9.
struct StateVector {
    Eigen::VectorXcd amplitudes;
    std::shared_ptr<const BasisSet> basis;

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }

    // Probability of configuration `config` (0 when truncated away).
    double probability(std::uint64_t config) const {
        const std::size_t idx = basis->index_of(config);
        if (idx == BasisSet::npos) return 0.0;
        return std::norm(amplitudes[static_cast<Eigen::Index>(idx)]);
    }
};

// |00…0⟩ — every atom in the ground state. The all-ground configuration is
// index 0 in both basis modes (ascending codes, truncation keeps it).
inline StateVector ground_state(std::shared_ptr<const BasisSet> basis) {
    if (!basis || basis->dim() == 0) throw std::invalid_argument("ground_state: empty basis");
    StateVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()));
    psi.amplitudes[0] = 1.0;
    psi.basis = std::move(basis);
    return psi;
}

// Basis state for an arbitrary configuration (must survive truncation).
inline StateVector basis_state(std::shared_ptr<const BasisSet> basis, std::uint64_t config) {
    if (!basis) throw std::invalid_argument("basis_state: null basis");
    const std::size_t idx = basis->index_of(config);
    if (idx == BasisSet::npos)
        throw std::invalid_argument("basis_state: configuration not in the basis");
    StateVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()));
    psi.amplitudes[static_cast<Eigen::Index>(idx)] = 1.0;
    psi.basis = std::move(basis);
    return psi;
}

// Per-site excitation probability d_i = Σ_c |a_c|² · [site i excited in c].
inline std::vector<double> rydberg_density(const StateVector& psi) {
    const auto& b = *psi.basis;
    std::vector<double> d(static_cast<std::size_t>(b.n_sites), 0.0);
    for (std::size_t s = 0; s < b.dim(); ++s) {
        const double p = std::norm(psi.amplitudes[static_cast<Eigen::Index>(s)]);
        if (p == 0.0) continue;
        const std::uint64_t c = b.states[s];
        for (int i = 0; i < b.n_sites; ++i)
            if (b.excited(c, i)) d[static_cast<std::size_t>(i)] += p;
    }
    return d;
}

// Measurement distribution p(c) = |a_c|² keyed by configuration code
// (Rydberg-bit convention). Configurations truncated away are simply absent,
// i.e. have probability 0.
inline std::map<std::uint64_t, double> outcome_distribution(const StateVector& psi) {
    std::map<std::uint64_t, double> p;
    const auto& b = *psi.basis;
    for (std::size_t s = 0; s < b.dim(); ++s)
        p[b.states[s]] = std::norm(psi.amplitudes[static_cast<Eigen::Index>(s)]);
    return p;
}

// One projective measurement in the Z basis: inverse-CDF draw over |a_c|².
inline std::uint64_t sample_bitstring(const StateVector& psi, std::mt19937_64& rng) {
    const double u = canonical_double(rng) * psi.amplitudes.squaredNorm();
    double acc = 0.0;
    const auto n = psi.amplitudes.size();
    for (Eigen::Index s = 0; s < n; ++s) {
        acc += std::norm(psi.amplitudes[s]);
        if (u < acc) return psi.basis->states[static_cast<std::size_t>(s)];
    }
    return psi.basis->states[psi.basis->dim() - 1];  // u landed on accumulated round-off
}

}  // namespace ryd
