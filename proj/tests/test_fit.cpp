#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ryd/fit.hpp"

using namespace ryd;

namespace {

struct Samples {
    std::vector<double> t, z;
};

Samples sample(double t_max, int n, auto&& f) {
    Samples s;
    for (int i = 0; i < n; ++i) {
        const double ti = t_max * i / (n - 1);
        s.t.push_back(ti);
        s.z.push_back(f(ti));
    }
    return s;
}

}  // namespace

TEST_CASE("damped sinusoid parameters are recovered from clean data") {
    const double A = 0.4, W = 9.0, phi = 0.7, tau = 2.0, B = 0.5;
    const auto s = sample(2.0, 50, [&](double t) {
        return A * std::sin(W * t + phi) * std::exp(-t / tau) + B;
    });
    const auto fit = fit_damped_sinusoid(s.t, s.z);
    REQUIRE(fit.A == Catch::Approx(A).margin(1e-6));
    REQUIRE(fit.Omega == Catch::Approx(W).margin(1e-6));
    REQUIRE(fit.phi == Catch::Approx(phi).margin(1e-6));
    REQUIRE(fit.tau == Catch::Approx(tau).epsilon(1e-5));
    REQUIRE(fit.B == Catch::Approx(B).margin(1e-6));
    REQUIRE_FALSE(fit.tau_unbounded());
    REQUIRE(fit.residual_rms < 1e-7);
}

TEST_CASE("an undamped oscillation reports an unbounded lifetime") {
    const auto s = sample(1.0, 40, [](double t) { return 0.5 * std::sin(15.0 * t) + 0.5; });
    const auto fit = fit_damped_sinusoid(s.t, s.z);
    REQUIRE(fit.tau_unbounded());
    REQUIRE(std::isinf(fit.tau));
    REQUIRE(fit.Omega == Catch::Approx(15.0).margin(1e-6));
    REQUIRE(fit.A == Catch::Approx(0.5).margin(1e-6));
    REQUIRE(fit.phi == Catch::Approx(0.0).margin(1e-6));
    REQUIRE(fit.B == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("amplitude comes out positive with the phase wrapped accordingly") {
    // A·sin(wt + 2.5) has a negative sine quadrature; the fit must fold the
    // sign into the phase, not report a negative amplitude
    const auto s = sample(1.5, 60, [](double t) { return 0.3 * std::sin(12.0 * t + 2.5); });
    const auto fit = fit_damped_sinusoid(s.t, s.z);
    REQUIRE(fit.A == Catch::Approx(0.3).margin(1e-6));
    REQUIRE(fit.phi == Catch::Approx(2.5).margin(1e-6));
    REQUIRE(fit.B == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("a small contaminating tone shifts parameters only slightly") {
    const auto s = sample(2.0, 80, [](double t) {
        return 0.4 * std::sin(9.0 * t) * std::exp(-t / 1.5) + 0.5 + 0.005 * std::cos(41.0 * t);
    });
    const auto fit = fit_damped_sinusoid(s.t, s.z);
    REQUIRE(fit.Omega == Catch::Approx(9.0).margin(0.05));
    REQUIRE(fit.A == Catch::Approx(0.4).margin(0.01));
    REQUIRE(fit.tau == Catch::Approx(1.5).epsilon(0.05));
    REQUIRE(fit.residual_rms > 1e-4);   // the tone is not part of the model
    REQUIRE(fit.residual_rms < 6e-3);   // but it is all that remains
}

TEST_CASE("fast decay within the sampled span is resolved") {
    const auto s = sample(2.0, 100, [](double t) {
        return 0.5 * std::sin(20.0 * t) * std::exp(-t / 0.3);
    });
    const auto fit = fit_damped_sinusoid(s.t, s.z);
    REQUIRE_FALSE(fit.tau_unbounded());
    REQUIRE(fit.tau == Catch::Approx(0.3).epsilon(1e-4));
    REQUIRE(fit.Omega == Catch::Approx(20.0).margin(1e-4));
}

TEST_CASE("degenerate oscillation data is rejected") {
    const auto good = sample(1.0, 20, [](double t) { return std::sin(10.0 * t); });

    auto short_t = good.t;
    short_t.pop_back();
    REQUIRE_THROWS_AS(fit_damped_sinusoid(short_t, good.z), std::invalid_argument);

    const std::vector<double> seven_t{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const std::vector<double> seven_z{0, 1, 0, -1, 0, 1, 0};
    REQUIRE_THROWS_AS(fit_damped_sinusoid(seven_t, seven_z), InsufficientDataError);

    const std::vector<double> same_t(20, 0.5);
    REQUIRE_THROWS_AS(fit_damped_sinusoid(same_t, good.z), InsufficientDataError);

    const std::vector<double> flat(20, 0.25);
    REQUIRE_THROWS_AS(fit_damped_sinusoid(good.t, flat), FitError);
}

namespace {

// |C_ij| = amp·e^{−|i−j|/xi} with the staggered sign of a Z2-ordered chain.
Eigen::MatrixXd staggered_decay(int n, double amp, double xi) {
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int d = std::abs(i - j);
            c(i, j) = (d % 2 == 0 ? 1.0 : -1.0) * amp * std::exp(-d / xi);
        }
    return c;
}

}  // namespace

TEST_CASE("correlation length is exact on synthetic exponential decay") {
    const auto c = staggered_decay(10, 0.25, 3.9);
    const auto fit = fit_correlation_length(c);
    REQUIRE(fit.lambda == Catch::Approx(3.9).epsilon(1e-9));
    REQUIRE(fit.slope == Catch::Approx(-1.0 / 3.9).epsilon(1e-9));
    REQUIRE(fit.intercept == Catch::Approx(std::log(0.25)).margin(1e-9));
    REQUIRE(fit.separations_used == 9);
    REQUIRE(fit.residual_rms < 1e-10);
    REQUIRE_FALSE(fit.unbounded());
}

TEST_CASE("separations below the statistical noise floor are excluded") {
    const int n = 12;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) c(i, i) = 0.25;
    for (int d = 1; d < n; ++d)
        for (int i = 0; i + d < n; ++i) {
            double v;
            if (d <= 4) {
                v = 0.3 * std::exp(-d / 2.5);  // clean decay
            } else if (d <= 10) {
                v = i % 2 == 0 ? 0.0 : 2e-6;   // scattered noise: mean < 3 SE
            } else {
                v = 0.0;                       // exactly zero: nothing to use
            }
            c(i, i + d) = c(i + d, i) = v;
        }
    const auto fit = fit_correlation_length(c);
    REQUIRE(fit.separations_used == 4);
    REQUIRE(fit.lambda == Catch::Approx(2.5).epsilon(1e-9));
    REQUIRE(fit.intercept == Catch::Approx(std::log(0.3)).margin(1e-9));
}

TEST_CASE("non-decaying correlations report an unbounded length") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(8, 8, 0.2);
    const auto fit = fit_correlation_length(c);
    REQUIRE(fit.unbounded());
    REQUIRE(fit.slope == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("correlation length input validation") {
    REQUIRE_THROWS_AS(fit_correlation_length(Eigen::MatrixXd::Zero(5, 4)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(fit_correlation_length(Eigen::MatrixXd::Constant(4, 4, 0.1)),
                      InsufficientDataError);

    // only separations 1 and 2 carry signal: fewer than 3 usable points
    Eigen::MatrixXd sparse = Eigen::MatrixXd::Zero(8, 8);
    for (int d = 1; d <= 2; ++d)
        for (int i = 0; i + d < 8; ++i) sparse(i, i + d) = sparse(i + d, i) = 0.1 / d;
    REQUIRE_THROWS_AS(fit_correlation_length(sparse), InsufficientDataError);
}
