#pragma once

// Independent reference propagator for cross-checking the production
// integrator. Deliberately implemented from scratch against the model
// definition: the Hamiltonian is assembled as an explicit dense matrix by
// looping over basis configurations, and each time step applies
// exp(-i H(t_mid) dt) through a full eigendecomposition. Nothing here calls
// the library's HamiltonianOperator or Krylov code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ryd/basis.hpp"
#include "ryd/geometry.hpp"
#include "ryd/program.hpp"

namespace oracle {

// Same physical constant as the library uses, restated here so the oracle
// does not depend on the production headers' value.
inline constexpr double c6_um6_rad_per_us = 5'420'503.0;

struct OracleOptions {
  std::vector<double> site_rabi_scale;   // empty = all 1
  std::vector<double> site_delta_offset; // empty = all 0
  Eigen::VectorXcd initial_state;        // size 0 = all-ground
};

// Dense H for drive values (omega, delta, phi):
//   diagonal: -sum_i (delta - d_i) n_i + sum_{i<j} C6/r_ij^6 n_i n_j
//   off-diagonal: (omega/2) s_i e^{+i phi} |g_i><r_i| + h.c.
inline Eigen::MatrixXcd build_hamiltonian(const ryd::BasisSet& basis,
                                          const std::vector<ryd::Vec2>& pos,
                                          double omega, double delta, double phi,
                                          const OracleOptions& opts = {}) {
  const int n = basis.n_sites;
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  if (static_cast<int>(pos.size()) != n)
    throw std::invalid_argument("oracle: positions/basis size mismatch");

  auto rabi_scale = [&](int i) {
    return opts.site_rabi_scale.empty() ? 1.0
                                        : opts.site_rabi_scale[static_cast<std::size_t>(i)];
  };
  auto delta_off = [&](int i) {
    return opts.site_delta_offset.empty() ? 0.0
                                          : opts.site_delta_offset[static_cast<std::size_t>(i)];
  };

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const std::complex<double> de_excite = 0.5 * omega * std::polar(1.0, phi);

  for (Eigen::Index s = 0; s < dim; ++s) {
    const std::uint64_t c = basis.states[static_cast<std::size_t>(s)];
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!basis.excited(c, i)) continue;
      diag -= delta - delta_off(i);
      for (int j = i + 1; j < n; ++j) {
        if (!basis.excited(c, j)) continue;
        const double dx = pos[static_cast<std::size_t>(i)].x - pos[static_cast<std::size_t>(j)].x;
        const double dy = pos[static_cast<std::size_t>(i)].y - pos[static_cast<std::size_t>(j)].y;
        const double r2 = dx * dx + dy * dy;
        diag += c6_um6_rad_per_us / (r2 * r2 * r2);
      }
    }
    h(s, s) = diag;

    // Fill each flip pair once, from the configuration that has the
    // excitation: <c-without-r_i| H |c-with-r_i> = (omega/2) s_i e^{+i phi}.
    for (int i = 0; i < n; ++i) {
      if (!basis.excited(c, i)) continue;
      const std::size_t row = basis.index_of(c ^ basis.site_bit(i));
      if (row == ryd::BasisSet::npos) continue;
      const std::complex<double> v = rabi_scale(i) * de_excite;
      h(static_cast<Eigen::Index>(row), s) = v;
      h(s, static_cast<Eigen::Index>(row)) = std::conj(v);
    }
  }
  return h;
}

// Evolves by midpoint piecewise-constant exponentials with steps <= dt,
// computed by dense eigendecomposition. Returns the state at each requested
// sample time (ascending). With dt a factor ~10 below the production
// integrator's dt_max the discretization error of this reference is ~100x
// smaller, so disagreement measures the production integrator's error.
inline std::vector<Eigen::VectorXcd> dense_evolve(const ryd::AnalogProgram& prog,
                                                  const ryd::BasisSet& basis, double dt,
                                                  const std::vector<double>& sample_times,
                                                  const OracleOptions& opts = {}) {
  const double T = prog.duration;
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  const std::vector<ryd::Vec2> pos = prog.reg.positions();

  // Real arithmetic is valid when every phase value has e^{i phi} real.
  bool real_case = true;
  for (const auto& seg : prog.phase.segments)
    if (std::abs(std::sin(seg.value)) > 1e-15) real_case = false;

  Eigen::VectorXcd psi;
  if (opts.initial_state.size() > 0) {
    psi = opts.initial_state / opts.initial_state.norm();
  } else {
    psi = Eigen::VectorXcd::Zero(dim);
    psi[0] = 1.0;
  }

  std::vector<double> cuts{0.0, T};
  for (const auto& k : prog.omega.knots) cuts.push_back(k.t);
  for (const auto& k : prog.delta.knots) cuts.push_back(k.t);
  for (double tj : prog.phase.jump_times())
    if (tj > 0.0 && tj < T) cuts.push_back(tj);
  for (double ts : sample_times) cuts.push_back(std::clamp(ts, 0.0, T));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> grid;
  for (double t : cuts) {
    if (t < -1e-9 || t > T + 1e-9) continue;
    if (grid.empty() || t - grid.back() > 1e-12) grid.push_back(t);
  }

  // Cache the last decomposition: constant-drive segments reuse it.
  double last_omega = 0.0, last_delta = 0.0, last_phi = 0.0;
  bool have_decomp = false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_real;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_cplx;

  auto step = [&](double om, double de, double ph, double h_step) {
    if (!have_decomp || om != last_omega || de != last_delta || ph != last_phi) {
      const Eigen::MatrixXcd h = build_hamiltonian(basis, pos, om, de, ph, opts);
      if (real_case) {
        es_real.compute(h.real());
        if (es_real.info() != Eigen::Success)
          throw std::runtime_error("oracle: eigendecomposition failed");
      } else {
        es_cplx.compute(h);
        if (es_cplx.info() != Eigen::Success)
          throw std::runtime_error("oracle: eigendecomposition failed");
      }
      last_omega = om;
      last_delta = de;
      last_phi = ph;
      have_decomp = true;
    }
    if (real_case) {
      const Eigen::MatrixXd& q = es_real.eigenvectors();
      Eigen::VectorXd yr = q.transpose() * psi.real();
      Eigen::VectorXd yi = q.transpose() * psi.imag();
      Eigen::VectorXcd z(dim);
      for (Eigen::Index k = 0; k < dim; ++k)
        z[k] = std::polar(1.0, -h_step * es_real.eigenvalues()[k]) *
               std::complex<double>(yr[k], yi[k]);
      psi.real() = q * z.real();
      psi.imag() = q * z.imag();
    } else {
      Eigen::VectorXcd y = es_cplx.eigenvectors().adjoint() * psi;
      for (Eigen::Index k = 0; k < dim; ++k)
        y[k] *= std::polar(1.0, -h_step * es_cplx.eigenvalues()[k]);
      psi = es_cplx.eigenvectors() * y;
    }
  };

  std::vector<Eigen::VectorXcd> out;
  out.reserve(sample_times.size());
  std::size_t next = 0;
  auto emit_at = [&](double t_now) {
    while (next < sample_times.size() &&
           std::clamp(sample_times[next], 0.0, T) <= t_now + 1e-11) {
      out.push_back(psi / psi.norm());
      ++next;
    }
  };

  emit_at(0.0);
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    const double t0 = grid[g], t1 = grid[g + 1];
    const double len = t1 - t0;
    const int nsub = std::max(1, static_cast<int>(std::ceil(len / dt - 1e-9)));
    const double h_step = len / nsub;
    for (int k = 0; k < nsub; ++k) {
      const double t_mid = t0 + (k + 0.5) * h_step;
      step(prog.omega_at(t_mid), prog.delta_at(t_mid), prog.phase_at(t_mid), h_step);
    }
    emit_at(t1);
  }
  emit_at(T);
  return out;
}

}  // namespace oracle
