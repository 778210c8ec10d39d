#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ryd/capabilities.hpp"
#include "ryd/geometry.hpp"

namespace ryd {

// Pairwise van der Waals couplings V_ij = C6 / |x_i - x_j|^6 in rad/us for a
// set of positions in um. Symmetric with a zero diagonal.
inline Eigen::MatrixXd interaction_matrix(const std::vector<Vec2>& positions,
                                          double c6 = aquila_capabilities().c6) {
    const auto n = static_cast<Eigen::Index>(positions.size());
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = distance(positions[i], positions[j]);
            if (d <= 0.0)
                throw std::domain_error("interaction_matrix: coincident positions");
            const double d2 = d * d;
            v(i, j) = v(j, i) = c6 / (d2 * d2 * d2);
        }
    }
    return v;
}

inline Eigen::MatrixXd interaction_matrix(const Register& reg,
                                          double c6 = aquila_capabilities().c6) {
    return interaction_matrix(reg.positions(), c6);
}

// Distance at which the interaction equals the combined drive scale
// sqrt(Omega^2 + Delta^2): R_b = (C6 / sqrt(Omega^2 + Delta^2))^(1/6).
// Within this radius simultaneous excitation of two atoms is suppressed.
inline double blockade_radius(double omega, double delta,
                              double c6 = aquila_capabilities().c6) {
    const double scale = std::hypot(omega, delta);
    if (scale <= 0.0)
        throw std::domain_error("blockade_radius: need a nonzero drive scale");
    return std::pow(c6 / scale, 1.0 / 6.0);
}

}  // namespace ryd
