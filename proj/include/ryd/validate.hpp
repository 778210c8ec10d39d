#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ryd/capabilities.hpp"
#include "ryd/program.hpp"

namespace ryd {

struct Finding {
    std::string rule;     // stable machine-readable id, e.g. "rabi-max"
    std::string message;  // human-readable detail
    int element = -1;     // offending site/knot/segment index when applicable
    friend bool operator==(const Finding&, const Finding&) = default;
};

// Outcome of checking a program against the capability model. A program is
// runnable exactly when `errors` is empty; warnings flag legal-but-fragile
// constructs (phase jumps under drive, very short segments).
struct ValidationReport {
    std::vector<Finding> errors;
    std::vector<Finding> warnings;

    bool ok() const { return errors.empty(); }

    bool has_error(const std::string& rule) const {
        for (const auto& f : errors)
            if (f.rule == rule) return true;
        return false;
    }
    bool has_warning(const std::string& rule) const {
        for (const auto& f : warnings)
            if (f.rule == rule) return true;
        return false;
    }

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Thrown when an operation requires a valid program but validation failed.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(ValidationReport report)
        : std::runtime_error(describe(report)), report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

  private:
    static std::string describe(const ValidationReport& rep) {
        std::string msg = "program failed validation:";
        for (const auto& f : rep.errors) msg += " [" + f.rule + "] " + f.message + ";";
        return msg;
    }
    ValidationReport report_;
};

namespace detail {

inline bool leq(double value, double limit) {
    return value <= limit + 1e-9 * std::max(1.0, std::abs(limit));
}

inline bool geq(double value, double limit) {
    return value >= limit - 1e-9 * std::max(1.0, std::abs(limit));
}

template <typename... Args>
std::string format_msg(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

}  // namespace detail

// Checks an analog program against the hardware restrictions. `relaxed` lifts
// the duration cap and the pattern-height cap, mirroring the extended limits
// of premium machine access; everything else stays enforced.
inline ValidationReport validate(const AnalogProgram& prog, const Capabilities& caps,
                                 bool relaxed = false) {
    using detail::format_msg;
    ValidationReport rep;
    auto error = [&](std::string rule, std::string msg, int element = -1) {
        rep.errors.push_back({std::move(rule), std::move(msg), element});
    };
    auto warn = [&](std::string rule, std::string msg) {
        rep.warnings.push_back({std::move(rule), std::move(msg), -1});
    };

    if (!prog.well_formed()) {
        error("structure", "waveforms must span exactly [0, duration] with increasing knots");
        return rep;  // remaining checks assume structural sanity
    }

    const auto& sites = prog.reg.sites;
    const std::size_t n = sites.size();

    // Site coordinates must be finite and non-negative.
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(sites[i].x) || !std::isfinite(sites[i].y) || sites[i].x < 0.0 ||
            sites[i].y < 0.0) {
            error("site-coords", format_msg("site ", i, " has a non-finite or negative coordinate"),
                  static_cast<int>(i));
        }
    }

    // (a) site and qubit counts
    if (n > caps.max_sites)
        error("max-sites", format_msg(n, " sites exceeds the cap of ", caps.max_sites));
    if (prog.reg.filled_count() > caps.max_qubits)
        error("max-qubits",
              format_msg(prog.reg.filled_count(), " filled sites exceeds the cap of ",
                         caps.max_qubits));

    // (b) bounding box, anchored at the minimum coordinate
    if (n > 0) {
        double min_x = sites[0].x, max_x = sites[0].x;
        double min_y = sites[0].y, max_y = sites[0].y;
        for (const auto& s : sites) {
            min_x = std::min(min_x, s.x);
            max_x = std::max(max_x, s.x);
            min_y = std::min(min_y, s.y);
            max_y = std::max(max_y, s.y);
        }
        if (!detail::leq(max_x - min_x, caps.max_width))
            error("bounding-box",
                  format_msg("pattern width ", max_x - min_x, " um exceeds ", caps.max_width));
        if (!relaxed && !detail::leq(max_y - min_y, caps.max_height))
            error("bounding-box",
                  format_msg("pattern height ", max_y - min_y, " um exceeds ", caps.max_height));
    }

    // (c) pairwise minimum distance
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!detail::geq(prog.reg.site_distance(i, j), caps.min_site_distance))
                error("min-distance",
                      format_msg("sites ", i, " and ", j, " are ", prog.reg.site_distance(i, j),
                                 " um apart (minimum ", caps.min_site_distance, ")"),
                      static_cast<int>(j));

    // (d) row structure: sites sharing a row share y exactly (1e-9 um slack
    // for floating-point noise); distinct rows are min_row_gap apart.
    if (n > 0) {
        std::vector<double> ys;
        ys.reserve(n);
        for (const auto& s : sites) ys.push_back(s.y);
        std::sort(ys.begin(), ys.end());
        std::vector<double> rows;
        for (double y : ys) {
            if (rows.empty() || y - rows.back() > 1e-9) rows.push_back(y);
        }
        for (std::size_t k = 1; k < rows.size(); ++k)
            if (!detail::geq(rows[k] - rows[k - 1], caps.min_row_gap))
                error("rows", format_msg("rows at y=", rows[k - 1], " and y=", rows[k],
                                         " are closer than ", caps.min_row_gap, " um"));
    }

    // (e) Rabi amplitude bounds: 0 <= Omega <= max_rabi (knots suffice for a
    // piecewise-linear waveform)
    for (std::size_t i = 0; i < prog.omega.knots.size(); ++i) {
        const double v = prog.omega.knots[i].value;
        if (!detail::leq(v, caps.max_rabi))
            error("rabi-max", format_msg("Omega=", v, " rad/us exceeds ", caps.max_rabi),
                  static_cast<int>(i));
        if (!detail::geq(v, 0.0))
            error("rabi-max", format_msg("Omega=", v, " rad/us is negative"),
                  static_cast<int>(i));
    }

    // (f) Rabi slew rate per linear segment
    for (std::size_t i = 1; i < prog.omega.knots.size(); ++i) {
        const auto& a = prog.omega.knots[i - 1];
        const auto& b = prog.omega.knots[i];
        const double slope = std::abs((b.value - a.value) / (b.t - a.t));
        if (!detail::leq(slope, caps.max_rabi_slew))
            error("rabi-slew",
                  format_msg("Omega slope ", slope, " rad/us^2 on segment ", i - 1, " exceeds ",
                             caps.max_rabi_slew),
                  static_cast<int>(i - 1));
    }

    // (g) detuning range
    for (std::size_t i = 0; i < prog.delta.knots.size(); ++i) {
        const double v = prog.delta.knots[i].value;
        if (!detail::leq(std::abs(v), caps.max_abs_detuning))
            error("detuning-range",
                  format_msg("|Delta|=", std::abs(v), " rad/us exceeds ", caps.max_abs_detuning),
                  static_cast<int>(i));
    }

    // (h) duration cap (lifted under relaxed access)
    if (!relaxed && !detail::leq(prog.duration, caps.max_duration))
        error("duration",
              format_msg("duration ", prog.duration, " us exceeds ", caps.max_duration));

    // (i) the drive must start and end switched off
    if (prog.duration > 0.0) {
        if (std::abs(prog.omega.start_value()) > 1e-9)
            error("rabi-endpoints", "Omega(0) must be 0");
        if (std::abs(prog.omega.end_value()) > 1e-9)
            error("rabi-endpoints", "Omega(duration) must be 0");
    }

    // Warning: phase jumps while the drive is active behave poorly on the
    // modulator hardware.
    for (double tj : prog.phase.jump_times()) {
        if (tj <= prog.duration + 1e-12 && prog.omega_at(std::min(tj, prog.duration)) > 1e-9)
            warn("phase-jump-while-driving",
                 format_msg("phase jump at t=", tj, " us while Omega > 0"));
    }

    // Warning: segments shorter than the control bandwidth can resolve.
    auto check_short = [&](const Waveform& w, const char* name) {
        for (std::size_t i = 1; i < w.knots.size(); ++i) {
            const double dt = w.knots[i].t - w.knots[i - 1].t;
            if (dt < 0.01 - 1e-12)
                warn("short-segment",
                     format_msg(name, " segment ", i - 1, " lasts ", dt, " us (< 0.01)"));
        }
    };
    check_short(prog.omega, "Omega");
    check_short(prog.delta, "Delta");

    return rep;
}

}  // namespace ryd
