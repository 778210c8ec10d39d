#pragma once

#include <cstddef>

namespace ryd {

// Hardware capability model: the published restrictions on allowed analog
// programs plus the Rydberg interaction coefficient. Default values are the
// production datasheet numbers for the 256-qubit machine.
struct Capabilities {
    std::size_t max_sites = 256;       // filled + unfilled user sites
    std::size_t max_qubits = 256;      // filled sites
    double max_width = 75.0;           // um, site pattern extent in x
    double max_height = 76.0;          // um, site pattern extent in y
    double min_site_distance = 4.0;    // um, any pair of sites
    double min_row_gap = 4.0;          // um, vertical spacing between rows
    double max_rabi = 15.8;            // rad/us
    double max_rabi_slew = 250.0;      // rad/us^2, |dOmega/dt|
    double max_abs_detuning = 125.0;   // rad/us
    double max_duration = 4.0;         // us
    double c6 = 5420503.0;             // um^6 rad/us, 70S Rydberg interaction

    friend bool operator==(const Capabilities&, const Capabilities&) = default;
};

inline Capabilities aquila_capabilities() { return Capabilities{}; }

}  // namespace ryd
