#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "ryd/geometry.hpp"
#include "ryd/program.hpp"
#include "ryd/rng.hpp"

namespace ryd {

// Shot-to-shot error model: coherent Gaussian parameter scatter plus a
// measurement confusion channel and trap-fill failures. Defaults are all-off;
// aquila_noise() carries the hardware datasheet values.
struct NoiseParams {
    double sigma_pos = 0.0;       // um, per-axis per-shot thermal position jitter
    double delta_pos_sys = 0.0;   // um, magnitude of the static per-site offset
    double rabi_inhom_rel = 0.0;  // relative RMS of the static Rabi inhomogeneity
    double det_inhom_rms = 0.0;   // rad/us, static detuning inhomogeneity RMS
    double det_sys = 0.0;         // rad/us, global systematic detuning offset
    double det_shot_rms = 0.0;    // rad/us, shot-to-shot detuning RMS
    double rabi_shot_rel = 0.0;   // relative shot-to-shot Rabi RMS
    double eps_fill = 0.0;        // probability a requested site fails to fill
    double eps_det_fn = 0.0;      // filled site reported empty in pre_sequence
    double eps_det_fp = 0.0;      // empty site reported filled in pre_sequence
    double eps_det_gnd = 0.0;     // ground atom read out as absent
    double eps_det_ryd = 0.0;     // Rydberg atom read out as present
    friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

inline NoiseParams no_noise() { return {}; }

// Hardware datasheet error budget.
inline NoiseParams aquila_noise() {
    NoiseParams p;
    p.sigma_pos = 0.200;
    p.delta_pos_sys = 0.050;
    p.rabi_inhom_rel = 0.02;
    p.det_inhom_rms = 0.37;
    p.det_sys = 0.63;
    p.det_shot_rms = 0.18;
    p.rabi_shot_rel = 0.008;
    p.eps_fill = 0.007;
    p.eps_det_fn = 0.01;
    p.eps_det_fp = 0.01;
    p.eps_det_gnd = 0.01;
    p.eps_det_ryd = 0.08;
    return p;
}

// Concrete parameter draw for one shot. Per-site arrays are indexed by
// register site. site_position_jitter already includes the static systematic
// offset, so perturbed positions are nominal + jitter.
struct ShotRealization {
    double delta_offset = 0.0;  // added detuning error (subtracted from the waveform)
    double rabi_scale = 1.0;    // global multiplier on the Rabi waveform
    std::vector<Vec2> site_position_jitter;
    std::vector<double> site_delta_inhom;  // frozen per task
    std::vector<double> site_rabi_inhom;   // frozen per task, multiplicative
    friend bool operator==(const ShotRealization&, const ShotRealization&) = default;
};

// Draws the realization for (task_seed, shot_index). Pure: repeated calls are
// bitwise identical. Per-task quantities (inhomogeneities, systematic offsets)
// come from a stream keyed by the seed alone and are identical across shots;
// per-shot quantities come from the (seed, shot) stream. The register is
// needed to size the arrays and to enforce a 0.1 um floor on jittered
// distances (a jitter draw that collapses two atoms is redrawn whole).
inline ShotRealization draw_realization(const NoiseParams& params, const Register& reg,
                                        std::uint64_t task_seed, std::uint64_t shot_index) {
    const std::size_t n = reg.size();
    ShotRealization r;
    r.site_delta_inhom.resize(n);
    r.site_rabi_inhom.resize(n);
    std::vector<Vec2> systematic(n);

    {
        auto rng = task_stream(task_seed, StreamTag::task_noise);
        for (std::size_t i = 0; i < n; ++i) {
            r.site_delta_inhom[i] = params.det_inhom_rms * normal_double(rng);
            r.site_rabi_inhom[i] = 1.0 + params.rabi_inhom_rel * normal_double(rng);
            const double angle = 2.0 * std::numbers::pi * canonical_double(rng);
            systematic[i] = {params.delta_pos_sys * std::cos(angle),
                             params.delta_pos_sys * std::sin(angle)};
        }
    }

    auto rng = substream(task_seed, shot_index, StreamTag::shot_noise);
    r.delta_offset = params.det_sys + params.det_shot_rms * normal_double(rng);
    r.rabi_scale = 1.0 + params.rabi_shot_rel * normal_double(rng);

    const auto nominal = reg.positions();
    r.site_position_jitter.resize(n);
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (std::size_t i = 0; i < n; ++i)
            r.site_position_jitter[i] = {systematic[i].x + params.sigma_pos * normal_double(rng),
                                         systematic[i].y + params.sigma_pos * normal_double(rng)};
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const Vec2 pi{nominal[i].x + r.site_position_jitter[i].x,
                          nominal[i].y + r.site_position_jitter[i].y};
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                const Vec2 pj{nominal[j].x + r.site_position_jitter[j].x,
                              nominal[j].y + r.site_position_jitter[j].y};
                if (distance(pi, pj) < 0.1) ok = false;
            }
        }
        if (ok) return r;
    }
    throw std::runtime_error("draw_realization: could not jitter positions apart");
}

// Applies the global parts of a realization: scaled Ω, shifted Δ, displaced
// positions. Per-site inhomogeneities cannot be expressed in a single global
// waveform; pass them to the engine as per-site drive modifiers.
inline AnalogProgram perturb(const AnalogProgram& prog, const ShotRealization& r) {
    AnalogProgram out = prog;
    out.omega = prog.omega.scaled(r.rabi_scale);
    out.delta = prog.delta.shifted(-r.delta_offset);
    if (!r.site_position_jitter.empty()) {
        if (r.site_position_jitter.size() != prog.reg.size())
            throw std::invalid_argument("perturb: jitter array does not match register");
        for (std::size_t i = 0; i < prog.reg.size(); ++i) {
            out.reg.sites[i].x += r.site_position_jitter[i].x;
            out.reg.sites[i].y += r.site_position_jitter[i].y;
        }
    }
    return out;
}

// Trap loading for one shot: which sites actually hold an atom, and what the
// pre-evolution camera image reports.
struct FillResult {
    std::vector<std::uint8_t> true_filled;   // physical occupation
    std::vector<std::uint8_t> pre_sequence;  // reported, after detection errors
    friend bool operator==(const FillResult&, const FillResult&) = default;
};

inline FillResult sample_filling(const Register& reg, const NoiseParams& params,
                                 std::mt19937_64& rng) {
    FillResult f;
    f.true_filled.resize(reg.size());
    f.pre_sequence.resize(reg.size());
    for (std::size_t i = 0; i < reg.size(); ++i) {
        const bool filled = reg.sites[i].filled && canonical_double(rng) >= params.eps_fill;
        f.true_filled[i] = filled ? 1 : 0;
        // detection channel: false negatives on filled traps, false positives
        // on empty ones
        const double flip = canonical_double(rng);
        f.pre_sequence[i] =
            filled ? (flip >= params.eps_det_fn ? 1 : 0) : (flip < params.eps_det_fp ? 1 : 0);
    }
    return f;
}

// Readout confusion, and the one place the two bit conventions meet:
// input bits say 1 = Rydberg (the engine's counting convention), output bits
// say 1 = atom present = ground (the camera convention). A perfect detector
// therefore *inverts* the string. Ground atoms are lost with eps_det_gnd;
// Rydberg atoms are recaptured (misread as present) with eps_det_ryd.
inline std::vector<std::uint8_t> confuse_bits(const std::vector<std::uint8_t>& rydberg_bits,
                                              const NoiseParams& params, std::mt19937_64& rng) {
    std::vector<std::uint8_t> present(rydberg_bits.size());
    for (std::size_t i = 0; i < rydberg_bits.size(); ++i) {
        const double u = canonical_double(rng);
        if (rydberg_bits[i])
            present[i] = u < params.eps_det_ryd ? 1 : 0;
        else
            present[i] = u < params.eps_det_gnd ? 0 : 1;
    }
    return present;
}

// Exact push-forward of a configuration distribution through the per-site
// confusion channel. Input keys use Rydberg-bit codes, output keys use
// presence-bit codes (same site↔bit assignment). Used as the analytic oracle
// for Monte-Carlo confuse_bits sampling. O(n·2^n): capped at 24 sites.
inline std::map<std::uint64_t, double> confuse_distribution(
    const std::map<std::uint64_t, double>& p, const NoiseParams& params, int n_sites) {
    if (n_sites < 0 || n_sites > 24)
        throw std::length_error("confuse_distribution: site count must be in [0, 24]");
    const std::size_t dim = std::size_t{1} << n_sites;
    std::vector<double> w(dim, 0.0);
    for (const auto& [config, prob] : p) {
        if (config >= dim)
            throw std::invalid_argument("confuse_distribution: configuration out of range");
        w[config] += prob;
    }
    // Per-site butterfly: transform the marginal of one bit at a time.
    //   P(out=1 | ground)  = 1 − eps_det_gnd     P(out=1 | rydberg) = eps_det_ryd
    for (int bit = 0; bit < n_sites; ++bit) {
        const std::size_t mask = std::size_t{1} << bit;
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (idx & mask) continue;
            const double pg = w[idx];         // this site ground (bit 0)
            const double pr = w[idx | mask];  // this site Rydberg (bit 1)
            // output bit 1 = present, bit 0 = absent
            w[idx | mask] = pg * (1.0 - params.eps_det_gnd) + pr * params.eps_det_ryd;
            w[idx] = pg * params.eps_det_gnd + pr * (1.0 - params.eps_det_ryd);
        }
    }
    std::map<std::uint64_t, double> out;
    for (std::size_t idx = 0; idx < dim; ++idx)
        if (w[idx] != 0.0) out[idx] = w[idx];
    return out;
}

}  // namespace ryd
