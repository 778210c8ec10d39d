#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ryd/hamiltonian.hpp"
#include "ryd/program.hpp"
#include "ryd/state.hpp"

namespace ryd {

struct IntegratorConfig {
    // Upper bound on one midpoint step, us. Controls the time-discretization
    // error (second order in the step).
    double dt_max = 1e-3;
    // Per-step Krylov truncation target. Kept far below the discretization
    // error so that thousands of accumulated steps stay well under 1e-9.
    double tolerance = 1e-12;
    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

class IntegratorError : public std::runtime_error {
  public:
    IntegratorError(const std::string& what, double t, double dt)
        : std::runtime_error(what), t_(t), dt_(dt) {}
    double step_time() const { return t_; }
    double step_size() const { return dt_; }

  private:
    double t_, dt_;
};

// Per-site drive modifiers and the optional injected initial state (used by
// noise realizations and by quench benchmarks that start from a prepared
// configuration instead of all-ground).
struct EvolveOptions {
    std::vector<double> site_rabi_scale;   // Ω multiplier per site; empty = all 1
    std::vector<double> site_delta_inhom;  // subtracted from Δ(t) per site; empty = all 0
    const StateVector* initial_state = nullptr;  // nullptr = all-ground
};

namespace detail {

// psi ← exp(−i·h·H(omega, delta, phi))·psi via a Lanczos (Krylov) polynomial
// approximation. The Krylov dimension grows until the standard a-posteriori
// estimate β_{m+1}·|h|·|y_m| drops below `tol`; a step that cannot converge
// by m_max is split in half recursively.
inline void krylov_step(const HamiltonianOperator& ham, double omega, double delta, double phi,
                        double h, Eigen::VectorXcd& psi, double tol, double step_t,
                        int depth = 0) {
    static constexpr int m_max = 30;
    static constexpr int depth_max = 30;
    const Eigen::Index dim = psi.size();
    if (depth > depth_max)
        throw IntegratorError("matrix-exponential step failed to converge", step_t, h);

    const double beta0 = psi.norm();
    if (beta0 == 0.0) return;

    const int m_cap = static_cast<int>(std::min<Eigen::Index>(m_max, dim));
    std::vector<Eigen::VectorXcd> v;
    v.reserve(static_cast<std::size_t>(m_cap) + 1);
    v.push_back(psi / beta0);
    std::vector<double> alpha, beta;  // real by Hermiticity
    Eigen::VectorXcd w(dim);

    auto subspace_result = [&](int m) {
        // exp(−i·h·T_m) e₁ over the real symmetric tridiagonal T_m
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m)
                t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        Eigen::VectorXcd phases(m);
        for (int i = 0; i < m; ++i)
            phases[i] = std::polar(1.0, -h * es.eigenvalues()[i]);
        const Eigen::VectorXd q1 = es.eigenvectors().row(0).transpose();
        return Eigen::VectorXcd(es.eigenvectors() * phases.cwiseProduct(q1.cast<std::complex<double>>()));
    };

    for (int j = 0; j < m_cap; ++j) {
        ham.apply(v[static_cast<std::size_t>(j)], omega, delta, phi, w);
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * v[static_cast<std::size_t>(j - 1)];
        const double a = (v[static_cast<std::size_t>(j)].dot(w)).real();
        alpha.push_back(a);
        w -= a * v[static_cast<std::size_t>(j)];
        // Full reorthogonalization: dims are modest, and it keeps per-step
        // unitarity near machine precision so norm drift stays tiny.
        for (int k = 0; k <= j; ++k) w -= (v[static_cast<std::size_t>(k)].dot(w)) * v[static_cast<std::size_t>(k)];
        const double b = w.norm();

        const int m = j + 1;
        if (b <= 1e-13 * std::max(1.0, std::abs(a))) {
            // happy breakdown: Krylov space is exact
            Eigen::VectorXcd y = subspace_result(m);
            psi.setZero();
            for (int k = 0; k < m; ++k) psi += y[k] * v[static_cast<std::size_t>(k)];
            psi *= beta0;
            return;
        }
        if (m >= 2 || m == m_cap) {
            Eigen::VectorXcd y = subspace_result(m);
            const double err = b * std::abs(h) * std::abs(y[m - 1]);
            if (err <= tol) {
                psi.setZero();
                for (int k = 0; k < m; ++k) psi += y[k] * v[static_cast<std::size_t>(k)];
                psi *= beta0;
                return;
            }
        }
        beta.push_back(b);
        v.push_back(w / b);
    }

    // Could not converge within m_max basis vectors: halve the step.
    krylov_step(ham, omega, delta, phi, h / 2, psi, tol / 2, step_t, depth + 1);
    krylov_step(ham, omega, delta, phi, h / 2, psi, tol / 2, step_t + h / 2, depth + 1);
}

}  // namespace detail

// Integrates the time-dependent Schrödinger equation for `prog` over `basis`
// and returns the state at each requested time (ascending; duplicates give
// duplicate snapshots).
//
// Scheme: [0, T] is cut at every waveform knot, phase-jump time, and sample
// time; each piece is subdivided into steps ≤ cfg.dt_max, and each step
// applies exp(−i·H(t_mid)·dt) — midpoint piecewise-constant propagation,
// second order in the step size and exactly unitary per step.
//
// No validation happens here: rectangular pulses and other hardware-illegal
// programs are deliberately evolvable for benchmarks. Run programs through
// validate() upstream when hardware rules matter.
inline std::vector<StateVector> evolve(const AnalogProgram& prog,
                                       std::shared_ptr<const BasisSet> basis,
                                       const IntegratorConfig& cfg,
                                       const std::vector<double>& sample_times,
                                       const EvolveOptions& opts = {}) {
    if (!(cfg.dt_max > 0.0) || !(cfg.tolerance > 0.0))
        throw std::invalid_argument("evolve: integrator config must be positive");
    if (!basis) throw std::invalid_argument("evolve: null basis");
    if (basis->n_sites != static_cast<int>(prog.reg.size()))
        throw std::invalid_argument("evolve: basis does not match register size");
    const double T = prog.duration;
    constexpr double t_eps = 1e-9;
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < -t_eps || sample_times[i] > T + t_eps)
            throw std::domain_error("evolve: sample time outside [0, duration]");
        if (i > 0 && sample_times[i] < sample_times[i - 1])
            throw std::invalid_argument("evolve: sample times must be ascending");
    }

    HamiltonianOperator ham(basis, interaction_matrix(prog.reg), opts.site_rabi_scale,
                            opts.site_delta_inhom);

    StateVector psi = opts.initial_state ? *opts.initial_state : ground_state(basis);
    if (opts.initial_state) {
        if (!psi.basis || !(*psi.basis == *basis))
            throw std::invalid_argument("evolve: initial state basis mismatch");
        const double n0 = psi.norm();
        if (n0 <= 0.0) throw std::invalid_argument("evolve: zero initial state");
        psi.amplitudes /= n0;
        psi.basis = basis;
    }

    // Cut points: piece boundaries where H's time dependence has kinks or
    // where a snapshot is due.
    std::vector<double> cuts{0.0, T};
    for (const auto& k : prog.omega.knots) cuts.push_back(k.t);
    for (const auto& k : prog.delta.knots) cuts.push_back(k.t);
    for (double tj : prog.phase.jump_times())
        if (tj > 0.0 && tj < T) cuts.push_back(tj);
    for (double ts : sample_times) cuts.push_back(std::clamp(ts, 0.0, T));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> grid;
    for (double t : cuts) {
        if (t < -t_eps || t > T + t_eps) continue;
        if (grid.empty() || t - grid.back() > 1e-12) grid.push_back(t);
    }

    std::vector<StateVector> out;
    out.reserve(sample_times.size());
    std::size_t next_sample = 0;
    double max_drift = 0.0;
    auto emit_at = [&](double t_now) {
        while (next_sample < sample_times.size() &&
               std::clamp(sample_times[next_sample], 0.0, T) <= t_now + 1e-11) {
            max_drift = std::max(max_drift, std::abs(psi.norm() - 1.0));
            StateVector snap = psi;
            snap.amplitudes /= snap.amplitudes.norm();
            out.push_back(std::move(snap));
            ++next_sample;
        }
    };

    emit_at(0.0);
    for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        const double t0 = grid[g], t1 = grid[g + 1];
        const double len = t1 - t0;
        const int nsub = std::max(1, static_cast<int>(std::ceil(len / cfg.dt_max - 1e-9)));
        const double h = len / nsub;
        for (int k = 0; k < nsub; ++k) {
            const double t_mid = t0 + (k + 0.5) * h;
            detail::krylov_step(ham, prog.omega_at(t_mid), prog.delta_at(t_mid),
                                prog.phase_at(t_mid), h, psi.amplitudes, cfg.tolerance, t_mid);
        }
        emit_at(t1);
    }
    emit_at(T);

    max_drift = std::max(max_drift, std::abs(psi.norm() - 1.0));
    if (max_drift > 1e-9)
        throw IntegratorError("norm drift exceeded 1e-9 over the run", T, cfg.dt_max);
    return out;
}

}  // namespace ryd
