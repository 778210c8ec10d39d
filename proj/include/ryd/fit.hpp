#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ryd {

class FitError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters of the heuristic decaying-oscillation model
//   z(t) = A·sin(Ω·t + φ)·e^{−t/τ} + B.
// tau is +infinity when the fit finds no decay the data can bound (fitted
// lifetime beyond 10× the sampled span).
struct FitResult {
    double A = 0.0;
    double Omega = 0.0;  // rad/us
    double phi = 0.0;    // rad
    double tau = std::numeric_limits<double>::infinity();  // us
    double B = 0.0;
    double residual_rms = 0.0;
    bool tau_unbounded() const { return std::isinf(tau); }
};

namespace detail {

// Sum-of-squares cost and residuals for the linearized model
//   z ≈ (a·sinΩt + b·cosΩt)·e^{−γt} + B,   θ = (a, b, B, Ω, γ).
inline double sinusoid_cost(const std::vector<double>& t, const std::vector<double>& z,
                            const Eigen::Matrix<double, 5, 1>& theta, Eigen::VectorXd* residual) {
    const double a = theta[0], b = theta[1], B = theta[2], w = theta[3], g = theta[4];
    double cost = 0.0;
    if (residual) residual->resize(static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = std::exp(-g * t[i]);
        const double r = (a * std::sin(w * t[i]) + b * std::cos(w * t[i])) * e + B - z[i];
        cost += r * r;
        if (residual) (*residual)[static_cast<Eigen::Index>(i)] = r;
    }
    return cost;
}

// Least-squares (a, b, B) at fixed (Ω, γ): linear in those three.
inline Eigen::Vector3d sinusoid_linear_init(const std::vector<double>& t,
                                            const std::vector<double>& z, double w, double g) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(t.size()), 3);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = std::exp(-g * t[i]);
        m(static_cast<Eigen::Index>(i), 0) = std::sin(w * t[i]) * e;
        m(static_cast<Eigen::Index>(i), 1) = std::cos(w * t[i]) * e;
        m(static_cast<Eigen::Index>(i), 2) = 1.0;
        rhs[static_cast<Eigen::Index>(i)] = z[i];
    }
    return m.colPivHouseholderQr().solve(rhs);
}

}  // namespace detail

// Fits z(t) = A·sin(Ωt + φ)·e^{−t/τ} + B by damped Gauss-Newton, seeded by
// the dominant peak of the data's power spectrum. Requires ≥ 8 samples
// covering at least one oscillation period. Throws FitError on flat or
// degenerate data.
inline FitResult fit_damped_sinusoid(const std::vector<double>& t, const std::vector<double>& z) {
    if (t.size() != z.size()) throw std::invalid_argument("fit_damped_sinusoid: length mismatch");
    const std::size_t n = t.size();
    if (n < 8) throw InsufficientDataError("fit_damped_sinusoid: need at least 8 samples");
    double t_min = t[0], t_max = t[0];
    for (double ti : t) {
        t_min = std::min(t_min, ti);
        t_max = std::max(t_max, ti);
    }
    const double span = t_max - t_min;
    if (!(span > 0)) throw InsufficientDataError("fit_damped_sinusoid: zero time span");

    double mean = 0.0;
    for (double zi : z) mean += zi;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double zi : z) var += (zi - mean) * (zi - mean);
    if (var <= 1e-24 * static_cast<double>(n) * std::max(1.0, mean * mean))
        throw FitError("fit_damped_sinusoid: flat data, no oscillation to fit");

    // Spectral seed: scan the periodogram from one cycle per span up to the
    // mean Nyquist rate, 8× oversampled.
    const double w_min = 2.0 * std::numbers::pi / span;
    const double w_max = std::numbers::pi * static_cast<double>(n - 1) / span;
    const double w_step = w_min / 8.0;
    double w_best = w_min, p_best = -1.0;
    for (double w = w_min; w <= w_max + 1e-12; w += w_step) {
        double cs = 0.0, sn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cs += (z[i] - mean) * std::cos(w * t[i]);
            sn += (z[i] - mean) * std::sin(w * t[i]);
        }
        const double p = cs * cs + sn * sn;
        if (p > p_best) {
            p_best = p;
            w_best = w;
        }
    }

    Eigen::Matrix<double, 5, 1> theta;
    {
        const Eigen::Vector3d lin = detail::sinusoid_linear_init(t, z, w_best, 0.0);
        theta << lin[0], lin[1], lin[2], w_best, 0.0;
    }

    Eigen::VectorXd residual;
    double cost = detail::sinusoid_cost(t, z, theta, &residual);
    double lambda = 1e-3;
    for (int iter = 0; iter < 500; ++iter) {
        const double a = theta[0], b = theta[1], w = theta[3], g = theta[4];
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 5);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = std::sin(w * t[i]), c = std::cos(w * t[i]);
            const double e = std::exp(-g * t[i]);
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = s * e;
            jac(row, 1) = c * e;
            jac(row, 2) = 1.0;
            jac(row, 3) = (a * c - b * s) * t[i] * e;
            jac(row, 4) = -(a * s + b * c) * t[i] * e;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * residual;

        bool stepped = false;
        for (int damp = 0; damp < 12; ++damp) {
            Eigen::MatrixXd lhs = jtj;
            for (int d = 0; d < 5; ++d) lhs(d, d) += lambda * std::max(jtj(d, d), 1e-12);
            const Eigen::Matrix<double, 5, 1> delta = lhs.ldlt().solve(-jtr);
            Eigen::Matrix<double, 5, 1> trial = theta + delta;
            trial[4] = std::max(trial[4], 0.0);  // decay only, never growth
            Eigen::VectorXd trial_res;
            const double trial_cost = detail::sinusoid_cost(t, z, trial, &trial_res);
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                const double rel_drop = (cost - trial_cost) / std::max(cost, 1e-300);
                theta = trial;
                residual.swap(trial_res);
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (rel_drop < 1e-10) iter = 500;  // converged
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) break;  // damping exhausted: local minimum
    }

    if (!theta.allFinite()) throw FitError("fit_damped_sinusoid: diverged");

    FitResult fit;
    double a = theta[0], b = theta[1];
    double w = theta[3];
    if (w < 0) {  // sin(−wt)a + cos(−wt)b = sin(wt)(−a) + cos(wt)b
        w = -w;
        a = -a;
    }
    fit.A = std::hypot(a, b);
    fit.phi = std::atan2(b, a);
    fit.Omega = w;
    fit.B = theta[2];
    const double g = theta[4];
    fit.tau = (g > 0 && 1.0 / g <= 10.0 * span) ? 1.0 / g
                                                : std::numeric_limits<double>::infinity();
    fit.residual_rms = std::sqrt(cost / static_cast<double>(n));
    return fit;
}

// Exponential decay length of a correlation matrix: averages |C_ij| over all
// pairs at each separation d ≥ 1, drops separations indistinguishable from
// statistical noise (mean below 3× its standard error, or non-positive), and
// linearly regresses log C̄(d) against d. λ = −1/slope.
struct CorrelationLengthFit {
    double lambda = std::numeric_limits<double>::infinity();  // sites
    double slope = 0.0;
    double intercept = 0.0;
    int separations_used = 0;
    double residual_rms = 0.0;  // in log space
    bool unbounded() const { return std::isinf(lambda); }
};

inline CorrelationLengthFit fit_correlation_length(const Eigen::MatrixXd& c) {
    const auto n = c.rows();
    if (c.cols() != n) throw std::invalid_argument("fit_correlation_length: C must be square");
    if (n < 5)
        throw InsufficientDataError("fit_correlation_length: need at least 4 separations");

    std::vector<double> ds, logs;
    for (Eigen::Index d = 1; d < n; ++d) {
        double sum = 0.0, sum2 = 0.0;
        const auto count = n - d;
        for (Eigen::Index i = 0; i + d < n; ++i) {
            const double v = std::abs(c(i, i + d));
            sum += v;
            sum2 += v * v;
        }
        const double m = sum / static_cast<double>(count);
        double se = 0.0;
        if (count >= 2) {
            const double var =
                std::max(0.0, (sum2 - sum * sum / static_cast<double>(count)) /
                                  static_cast<double>(count - 1));
            se = std::sqrt(var / static_cast<double>(count));
        }
        if (m <= 0.0 || m < 3.0 * se) continue;  // below the noise floor
        ds.push_back(static_cast<double>(d));
        logs.push_back(std::log(m));
    }
    if (ds.size() < 3)
        throw InsufficientDataError("fit_correlation_length: fewer than 3 usable separations");

    const auto m = static_cast<double>(ds.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        sx += ds[i];
        sy += logs[i];
        sxx += ds[i] * ds[i];
        sxy += ds[i] * logs[i];
    }
    const double denom = m * sxx - sx * sx;
    CorrelationLengthFit fit;
    fit.separations_used = static_cast<int>(ds.size());
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double r = fit.intercept + fit.slope * ds[i] - logs[i];
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / m);
    fit.lambda = fit.slope < -1e-12 ? -1.0 / fit.slope
                                    : std::numeric_limits<double>::infinity();
    return fit;
}

}  // namespace ryd
