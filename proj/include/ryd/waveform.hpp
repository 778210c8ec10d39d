#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ryd {

// Times are in microseconds, values in rad/us (or rad for phases) throughout.

struct WaveformKnot {
    double t = 0.0;
    double value = 0.0;
    friend bool operator==(const WaveformKnot&, const WaveformKnot&) = default;
};

// Piecewise-linear control waveform, e.g. the Rabi amplitude or detuning of an
// analog drive. Knot times are strictly increasing; the first knot sits at
// t = 0 and the last at the program duration. A single knot is only allowed
// for the degenerate zero-duration program.
struct Waveform {
    std::vector<WaveformKnot> knots;

    Waveform() = default;
    explicit Waveform(std::vector<WaveformKnot> k) : knots(std::move(k)) {}

    static Waveform constant(double duration, double value) {
        if (duration <= 0.0) return Waveform({{0.0, value}});
        return Waveform({{0.0, value}, {duration, value}});
    }

    bool empty() const { return knots.empty(); }
    double start_time() const { return knots.front().t; }
    double end_time() const { return knots.back().t; }
    double start_value() const { return knots.front().value; }
    double end_value() const { return knots.back().value; }

    // Linear interpolation between the bracketing knots; exact at knot times.
    double value_at(double t) const {
        if (knots.empty()) throw std::domain_error("waveform has no knots");
        const double eps = 1e-12 * std::max(1.0, std::abs(end_time()));
        if (t < start_time() - eps || t > end_time() + eps)
            throw std::domain_error("waveform evaluated outside its domain");
        t = std::clamp(t, start_time(), end_time());
        auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                                   [](double x, const WaveformKnot& k) { return x < k.t; });
        if (hi == knots.begin()) return knots.front().value;
        if (hi == knots.end()) return knots.back().value;
        auto lo = hi - 1;
        const double u = (t - lo->t) / (hi->t - lo->t);
        return lo->value + u * (hi->value - lo->value);
    }

    double max_value() const {
        double m = knots.front().value;
        for (const auto& k : knots) m = std::max(m, k.value);
        return m;
    }

    double min_value() const {
        double m = knots.front().value;
        for (const auto& k : knots) m = std::min(m, k.value);
        return m;
    }

    double max_abs() const { return std::max(std::abs(max_value()), std::abs(min_value())); }

    // Largest |slope| over the linear segments.
    double max_slope_abs() const {
        double m = 0.0;
        for (std::size_t i = 1; i < knots.size(); ++i) {
            const double dt = knots[i].t - knots[i - 1].t;
            if (dt <= 0.0) continue;
            m = std::max(m, std::abs((knots[i].value - knots[i - 1].value) / dt));
        }
        return m;
    }

    // Exact integral of the piecewise-linear function over its full span.
    double integral() const {
        double s = 0.0;
        for (std::size_t i = 1; i < knots.size(); ++i)
            s += 0.5 * (knots[i].value + knots[i - 1].value) * (knots[i].t - knots[i - 1].t);
        return s;
    }

    Waveform scaled(double factor) const {
        Waveform w = *this;
        for (auto& k : w.knots) k.value *= factor;
        return w;
    }

    Waveform shifted(double offset) const {
        Waveform w = *this;
        for (auto& k : w.knots) k.value += offset;
        return w;
    }

    // True when knot times are strictly increasing, starting at 0 and ending
    // at `duration`.
    bool spans(double duration, double eps = 1e-9) const {
        if (knots.empty()) return false;
        if (duration <= 0.0) return knots.size() == 1 && std::abs(knots[0].t) <= eps;
        if (knots.size() < 2) return false;
        if (std::abs(start_time()) > eps || std::abs(end_time() - duration) > eps) return false;
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (knots[i].t <= knots[i - 1].t) return false;
        return true;
    }

    friend bool operator==(const Waveform&, const Waveform&) = default;
};

struct PhaseSegment {
    double start = 0.0;  // us
    double value = 0.0;  // rad
    friend bool operator==(const PhaseSegment&, const PhaseSegment&) = default;
};

// Piecewise-constant phase of the Rabi drive. Segments are right-open: the
// value at a jump time is the new phase, and the final segment extends through
// the end of the program.
struct PhaseWaveform {
    std::vector<PhaseSegment> segments;

    PhaseWaveform() : segments{{0.0, 0.0}} {}
    explicit PhaseWaveform(std::vector<PhaseSegment> s) : segments(std::move(s)) {}

    static PhaseWaveform constant(double value) { return PhaseWaveform({{0.0, value}}); }

    double value_at(double t) const {
        if (segments.empty()) throw std::domain_error("phase waveform has no segments");
        if (t < segments.front().start - 1e-12)
            throw std::domain_error("phase evaluated before its first segment");
        auto hi = std::upper_bound(segments.begin(), segments.end(), t,
                                   [](double x, const PhaseSegment& s) { return x < s.start; });
        return (hi == segments.begin() ? hi : hi - 1)->value;
    }

    // Segment start times after t = 0, i.e. the phase-jump instants.
    std::vector<double> jump_times() const {
        std::vector<double> out;
        for (std::size_t i = 1; i < segments.size(); ++i) out.push_back(segments[i].start);
        return out;
    }

    bool well_formed(double eps = 1e-9) const {
        if (segments.empty()) return false;
        if (std::abs(segments.front().start) > eps) return false;
        for (std::size_t i = 1; i < segments.size(); ++i)
            if (segments[i].start <= segments[i - 1].start) return false;
        return true;
    }

    friend bool operator==(const PhaseWaveform&, const PhaseWaveform&) = default;
};

}  // namespace ryd
