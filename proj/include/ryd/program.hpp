#pragma once

#include <stdexcept>

#include "ryd/geometry.hpp"
#include "ryd/waveform.hpp"

namespace ryd {

// A complete analog quantum task: atom register, Rabi amplitude Omega(t),
// detuning Delta(t), drive phase phi(t), and total evolution time. Angular
// frequencies are rad/us, times us, positions um, throughout.
struct AnalogProgram {
    Register reg;
    Waveform omega;
    Waveform delta;
    PhaseWaveform phase;
    double duration = 0.0;  // us

    double omega_at(double t) const { return duration <= 0.0 ? omega.knots.front().value
                                                             : omega.value_at(t); }
    double delta_at(double t) const { return duration <= 0.0 ? delta.knots.front().value
                                                             : delta.value_at(t); }
    double phase_at(double t) const {
        if (t < -1e-12 || t > duration + 1e-12)
            throw std::domain_error("phase evaluated outside program duration");
        return phase.value_at(std::max(t, 0.0));
    }

    // Structural sanity: every waveform spans exactly [0, duration]. This is
    // a well-formedness check, not the hardware capability validation.
    bool well_formed() const {
        return duration >= 0.0 && omega.spans(duration) && delta.spans(duration) &&
               phase.well_formed();
    }

    friend bool operator==(const AnalogProgram&, const AnalogProgram&) = default;
};

}  // namespace ryd
