#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ryd/basis.hpp"
#include "ryd/evolve.hpp"
#include "ryd/noise.hpp"
#include "ryd/rng.hpp"
#include "ryd/state.hpp"
#include "ryd/validate.hpp"
#include "ryd/version.hpp"

namespace ryd {

// One measurement cycle. pre_sequence: 1 = site reported filled before
// evolution. post_sequence: 1 = atom present after readout = ground state;
// 0 = absent = Rydberg, lost, or never filled. A site whose pre_sequence is 0
// never reports a post_sequence 1 (nothing was trapped to re-image).
struct ShotRecord {
    std::vector<std::uint8_t> pre_sequence;
    std::vector<std::uint8_t> post_sequence;
    friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

struct TaskResult {
    AnalogProgram program;
    NoiseParams noise;          // all-zero when noise was off
    bool noise_enabled = false;
    std::uint64_t seed = 0;
    std::vector<ShotRecord> shots;
    std::string version;        // emulator version that produced the result
    friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

namespace detail {

// Register restricted to the sites flagged in `keep` (order preserved).
inline Register subregister(const Register& reg, const std::vector<std::uint8_t>& keep) {
    Register sub;
    for (std::size_t i = 0; i < reg.size(); ++i)
        if (keep[i]) sub.sites.push_back({reg.sites[i].x, reg.sites[i].y, true});
    return sub;
}

// Basis-mode policy for a given atom count: exact full basis while the state
// vector stays small, blockade truncation up to the hard cap.
inline BasisSet task_basis(const Register& sub, const AnalogProgram& prog) {
    const std::size_t n = sub.size();
    if (n <= 13) return build_basis(sub, BasisMode::full);
    if (n <= max_truncated_basis_sites)
        return build_basis(sub, BasisMode::blockade_truncated, default_blockade_cutoff(prog));
    throw std::length_error("run_task: register too large to emulate (cap " +
                            std::to_string(max_truncated_basis_sites) + " atoms)");
}

}  // namespace detail

// Runs a full measurement task: validation, then per shot trap filling, noise
// realization, evolution of the actually-loaded atoms, projective sampling,
// and readout confusion. Deterministic given (program, noise, seed, nshots):
// every random choice comes from a stream keyed by (seed, shot, purpose).
//
// With noise disabled the pure state is shot-independent, so one noiseless
// evolution is shared by all shots and only the projective draws differ.
inline TaskResult run_task(const AnalogProgram& prog, int nshots,
                           const std::optional<NoiseParams>& noise, std::uint64_t seed,
                           bool relaxed = false, const IntegratorConfig& cfg = {}) {
    if (nshots < 1) throw std::invalid_argument("run_task: need at least one shot");
    if (auto rep = validate(prog, aquila_capabilities(), relaxed); !rep.ok())
        throw ValidationError(std::move(rep));

    TaskResult result;
    result.program = prog;
    result.noise_enabled = noise.has_value();
    result.noise = noise.value_or(no_noise());
    result.seed = seed;
    result.version = version_string;
    result.shots.reserve(static_cast<std::size_t>(nshots));

    const std::size_t n_sites = prog.reg.size();
    std::vector<std::uint8_t> user_filled(n_sites);
    for (std::size_t i = 0; i < n_sites; ++i) user_filled[i] = prog.reg.sites[i].filled ? 1 : 0;

    if (!noise) {
        const Register sub = detail::subregister(prog.reg, user_filled);
        AnalogProgram reduced = prog;
        reduced.reg = sub;
        auto basis = std::make_shared<const BasisSet>(detail::task_basis(sub, prog));
        const StateVector final_state =
            evolve(reduced, basis, cfg, {prog.duration}).at(0);
        for (int shot = 0; shot < nshots; ++shot) {
            auto rng = substream(seed, static_cast<std::uint64_t>(shot), StreamTag::measure);
            const auto bits = basis->to_bits(sample_bitstring(final_state, rng));
            ShotRecord rec;
            rec.pre_sequence = user_filled;
            rec.post_sequence.assign(n_sites, 0);
            std::size_t k = 0;
            for (std::size_t i = 0; i < n_sites; ++i)
                if (user_filled[i]) rec.post_sequence[i] = bits[k++] ? 0 : 1;
            result.shots.push_back(std::move(rec));
        }
        return result;
    }

    const NoiseParams& params = *noise;
    for (int shot = 0; shot < nshots; ++shot) {
        const auto shot_u = static_cast<std::uint64_t>(shot);
        auto fill_rng = substream(seed, shot_u, StreamTag::fill);
        const FillResult fill = sample_filling(prog.reg, params, fill_rng);
        const ShotRealization real = draw_realization(params, prog.reg, seed, shot_u);

        // Atoms that actually loaded evolve under the perturbed Hamiltonian;
        // everything else sits this shot out.
        const AnalogProgram perturbed = perturb(prog, real);
        const Register sub_nominal = detail::subregister(prog.reg, fill.true_filled);
        AnalogProgram shot_prog = perturbed;
        shot_prog.reg = detail::subregister(perturbed.reg, fill.true_filled);

        std::vector<std::uint8_t> present;
        if (!sub_nominal.empty()) {
            EvolveOptions opts;
            for (std::size_t i = 0; i < n_sites; ++i) {
                if (!fill.true_filled[i]) continue;
                opts.site_rabi_scale.push_back(real.site_rabi_inhom[i]);
                opts.site_delta_inhom.push_back(real.site_delta_inhom[i]);
            }
            // The basis comes from the nominal geometry so a jitter draw can
            // never change which configurations are representable.
            auto basis = std::make_shared<const BasisSet>(detail::task_basis(sub_nominal, prog));
            const StateVector final_state =
                evolve(shot_prog, basis, cfg, {prog.duration}, opts).at(0);
            auto measure_rng = substream(seed, shot_u, StreamTag::measure);
            const auto bits = basis->to_bits(sample_bitstring(final_state, measure_rng));
            auto confusion_rng = substream(seed, shot_u, StreamTag::confusion);
            present = confuse_bits(bits, params, confusion_rng);
        }

        ShotRecord rec;
        rec.pre_sequence = fill.pre_sequence;
        rec.post_sequence.assign(n_sites, 0);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n_sites; ++i) {
            if (!fill.true_filled[i]) continue;
            const std::uint8_t p = present[k++];
            // A site reported unfilled stays 0: the record convention says a
            // never-seen atom cannot reappear, even if the pre-image erred.
            if (rec.pre_sequence[i]) rec.post_sequence[i] = p;
        }
        result.shots.push_back(std::move(rec));
    }
    return result;
}

}  // namespace ryd
