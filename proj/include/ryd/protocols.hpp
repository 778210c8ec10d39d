#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ryd/capabilities.hpp"
#include "ryd/program.hpp"

namespace ryd {

namespace detail {

// Appends a knot, merging with the previous one when both time and value
// repeat (builders below compose segments that touch at their boundaries).
inline void push_knot(std::vector<WaveformKnot>& knots, double t, double v) {
    if (!knots.empty() && std::abs(knots.back().t - t) < 1e-12) {
        if (std::abs(knots.back().value - v) > 1e-12)
            throw std::invalid_argument("waveform build: conflicting knot values at one time");
        return;
    }
    knots.push_back({t, v});
}

// Trapezoid pulse 0→height→0 appended at time t0; returns the end time.
// plateau may be 0 (triangle).
inline double push_trapezoid(std::vector<WaveformKnot>& knots, double t0, double height,
                             double ramp, double plateau) {
    push_knot(knots, t0, 0.0);
    push_knot(knots, t0 + ramp, height);
    if (plateau > 0) push_knot(knots, t0 + ramp + plateau, height);
    push_knot(knots, t0 + ramp + plateau + ramp, 0.0);
    return t0 + 2 * ramp + plateau;
}

inline void check_ramp(double omega, double ramp) {
    const double max_slew = aquila_capabilities().max_rabi_slew;
    if (!(ramp > 0) || omega / ramp > max_slew * (1.0 + 1e-9))
        throw std::invalid_argument("pulse ramp too steep for the Rabi slew limit");
}

// Shortest hardware-legal ramp for a pulse of the given height, with margin.
inline double min_ramp(double omega) {
    return 1.01 * omega / aquila_capabilities().max_rabi_slew;
}

}  // namespace detail

// Rabi-oscillation drive: Ω trapezoid 0→omega→0, constant Δ, φ=0.
inline AnalogProgram build_rabi(const Register& reg, double omega, double delta, double t_total,
                                double ramp) {
    detail::check_ramp(omega, ramp);
    if (2 * ramp > t_total + 1e-12)
        throw std::invalid_argument("build_rabi: ramps do not fit in the duration");
    std::vector<WaveformKnot> knots;
    detail::push_trapezoid(knots, 0.0, omega, ramp, t_total - 2 * ramp);
    return {reg, Waveform{knots}, Waveform::constant(t_total, delta),
            PhaseWaveform::constant(0.0), t_total};
}

// Ramsey sequence: two π/2 pulses separated by a dark hold. Pulse areas count
// the ramps, so each trapezoid satisfies ∫Ω dt = π/2 exactly.
inline AnalogProgram build_ramsey(const Register& reg, double hold, double omega, double ramp) {
    detail::check_ramp(omega, ramp);
    // trapezoid area = omega·(plateau + ramp)
    const double plateau = (std::numbers::pi / 2.0) / omega - ramp;
    if (plateau < -1e-12)
        throw std::invalid_argument("build_ramsey: ramps alone exceed a pi/2 pulse area");
    std::vector<WaveformKnot> knots;
    double t = detail::push_trapezoid(knots, 0.0, omega, ramp, std::max(plateau, 0.0));
    t += hold;
    t = detail::push_trapezoid(knots, t, omega, ramp, std::max(plateau, 0.0));
    return {reg, Waveform{knots}, Waveform::constant(t, 0.0), PhaseWaveform::constant(0.0), t};
}

// Spin echo: π/2 at φ=0, hold, π at φ=π/2, hold, π/2 at φ=π. The phase steps
// happen mid-hold while the drive is off. The final pulse's φ=π makes it act
// as the inverse of a φ=0 π/2 pulse, closing the echo.
inline AnalogProgram build_spin_echo(const Register& reg, double hold, double omega, double ramp) {
    detail::check_ramp(omega, ramp);
    const double half_plateau = (std::numbers::pi / 2.0) / omega - ramp;
    const double pi_plateau = std::numbers::pi / omega - ramp;
    if (half_plateau < -1e-12 || pi_plateau < -1e-12)
        throw std::invalid_argument("build_spin_echo: ramps alone exceed the pulse areas");
    if (!(hold > 0)) throw std::invalid_argument("build_spin_echo: hold must be positive");

    std::vector<WaveformKnot> knots;
    std::vector<PhaseSegment> phase{{0.0, 0.0}};
    double t = detail::push_trapezoid(knots, 0.0, omega, ramp, std::max(half_plateau, 0.0));
    phase.push_back({t + hold / 2, std::numbers::pi / 2});
    t += hold;
    t = detail::push_trapezoid(knots, t, omega, ramp, std::max(pi_plateau, 0.0));
    phase.push_back({t + hold / 2, std::numbers::pi});
    t += hold;
    t = detail::push_trapezoid(knots, t, omega, ramp, std::max(half_plateau, 0.0));
    return {reg, Waveform{knots}, Waveform::constant(t, 0.0), PhaseWaveform{phase}, t};
}

// Periodically modulated detuning Δ(t) = delta0·sin(w·t) under a constant
// drive plateau. The sine is stored piecewise-linearly with at least 100
// knots per period, densified further until the interpolation error bound
// (h²/8)·delta0·w² is below 1e-3 rad/μs.
inline AnalogProgram build_floquet(const Register& reg, double delta0, double w, double omega,
                                   double t_total, double ramp = 0.0) {
    if (ramp <= 0) ramp = detail::min_ramp(omega);
    detail::check_ramp(omega, ramp);
    if (2 * ramp > t_total + 1e-12)
        throw std::invalid_argument("build_floquet: ramps do not fit in the duration");
    std::vector<WaveformKnot> omega_knots;
    detail::push_trapezoid(omega_knots, 0.0, omega, ramp, t_total - 2 * ramp);

    std::vector<WaveformKnot> delta_knots;
    if (delta0 == 0.0 || w == 0.0) {
        delta_knots = {{0.0, 0.0}, {t_total, 0.0}};
    } else {
        const double period = 2.0 * std::numbers::pi / std::abs(w);
        double h = period / 100.0;
        const double h_err = std::sqrt(8.0 * 1e-3 / (std::abs(delta0) * w * w));
        h = std::min(h, h_err);
        const int steps = std::max(1, static_cast<int>(std::ceil(t_total / h)));
        for (int k = 0; k <= steps; ++k) {
            const double t = t_total * k / steps;
            delta_knots.push_back({t, delta0 * std::sin(w * t)});
        }
    }
    return {reg, Waveform{omega_knots}, Waveform{delta_knots}, PhaseWaveform::constant(0.0),
            t_total};
}

// Adiabatic sweep protocol: Ω ramps on and holds while Δ sweeps from delta_i
// to delta_f between the ramps, then Ω ramps off.
inline AnalogProgram build_adiabatic(const Register& reg, double omega_max, double delta_i,
                                     double delta_f, double t_ramp_omega, double t_sweep,
                                     double t_total) {
    detail::check_ramp(omega_max, t_ramp_omega);
    if (t_ramp_omega + t_sweep > t_total - t_ramp_omega + 1e-12)
        throw std::invalid_argument("build_adiabatic: sweep does not fit between the ramps");
    std::vector<WaveformKnot> omega_knots;
    detail::push_trapezoid(omega_knots, 0.0, omega_max, t_ramp_omega, t_total - 2 * t_ramp_omega);
    std::vector<WaveformKnot> delta_knots;
    detail::push_knot(delta_knots, 0.0, delta_i);
    detail::push_knot(delta_knots, t_ramp_omega, delta_i);
    detail::push_knot(delta_knots, t_ramp_omega + t_sweep, delta_f);
    detail::push_knot(delta_knots, t_total, delta_f);
    return {reg, Waveform{omega_knots}, Waveform{delta_knots}, PhaseWaveform::constant(0.0),
            t_total};
}

// Scar protocol: adiabatic ordered-state preparation that ends with the drive
// still on, an abrupt (one fast segment) return of Δ to 0, a resonant quench
// plateau, then the closing Ω ramp. Durations beyond the standard cap pass
// relaxed validation only.
inline AnalogProgram build_scar(const Register& reg, double omega_max, double delta_i,
                                double delta_f, double t_ramp_omega, double t_sweep,
                                double t_prep, double quench_t) {
    detail::check_ramp(omega_max, t_ramp_omega);
    if (t_ramp_omega + t_sweep > t_prep + 1e-12)
        throw std::invalid_argument("build_scar: sweep does not fit in the preparation stage");
    const double t_delta_drop = 1e-3;  // fast Δ→0 segment (no hardware slew cap on Δ)
    const double t_end_ramp = detail::min_ramp(omega_max);
    const double t_total = t_prep + t_delta_drop + quench_t + t_end_ramp;

    std::vector<WaveformKnot> omega_knots;
    detail::push_knot(omega_knots, 0.0, 0.0);
    detail::push_knot(omega_knots, t_ramp_omega, omega_max);
    detail::push_knot(omega_knots, t_total - t_end_ramp, omega_max);
    detail::push_knot(omega_knots, t_total, 0.0);

    std::vector<WaveformKnot> delta_knots;
    detail::push_knot(delta_knots, 0.0, delta_i);
    detail::push_knot(delta_knots, t_ramp_omega, delta_i);
    detail::push_knot(delta_knots, t_ramp_omega + t_sweep, delta_f);
    detail::push_knot(delta_knots, t_prep, delta_f);
    detail::push_knot(delta_knots, t_prep + t_delta_drop, 0.0);
    detail::push_knot(delta_knots, t_total, 0.0);
    return {reg, Waveform{omega_knots}, Waveform{delta_knots}, PhaseWaveform::constant(0.0),
            t_total};
}

// Two-pulse sequence with a laser phase jump xi between the pulses, the
// analog analogue of the Levine-Pichler entangling gate. Defaults reproduce
// the published optimum: Δ = 0.377371·Ω, pulse length Ω·τ = 4.29268,
// ξ = 3.90242. One atom, or two atoms placed 4 μm apart (deep blockade).
// The jump is scheduled at the instant Ω touches zero between the pulses.
inline AnalogProgram build_lp_analogue(int n_atoms, double omega, double delta = -1.0,
                                       double xi = 3.90242, double pulse_t = -1.0,
                                       double ramp = 0.0) {
    if (n_atoms != 1 && n_atoms != 2)
        throw std::invalid_argument("build_lp_analogue: one or two atoms only");
    if (!(omega > 0)) throw std::invalid_argument("build_lp_analogue: omega must be positive");
    if (delta < 0) delta = 0.377371 * omega;
    if (pulse_t <= 0) pulse_t = 4.29268 / omega;
    if (ramp <= 0) ramp = detail::min_ramp(omega);
    detail::check_ramp(omega, ramp);
    const double plateau = pulse_t - ramp;  // trapezoid area = omega·pulse_t
    if (plateau < 0)
        throw std::invalid_argument("build_lp_analogue: pulse too short for the ramps");

    Register reg = n_atoms == 1 ? Register::from_positions({{0, 0}})
                                : Register::from_positions({{0, 0}, {4, 0}});
    std::vector<WaveformKnot> knots;
    double t = detail::push_trapezoid(knots, 0.0, omega, ramp, plateau);
    const double t_jump = t;
    t = detail::push_trapezoid(knots, t, omega, ramp, plateau);
    return {reg, Waveform{knots}, Waveform::constant(t, delta),
            PhaseWaveform{{{0.0, 0.0}, {t_jump, xi}}}, t};
}

}  // namespace ryd
