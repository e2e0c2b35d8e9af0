#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "genland/diagnostics.hpp"
#include "genland/error.hpp"

namespace genland {

using State2 = Eigen::Vector2cd;

/// H(t) = −Jσ_x + s(t)σ_z/2 with s(t) = Σ_i A_i cos(Ω_i t).
struct DriveSignal {
  double hopping = 1.0;
  std::vector<double> amplitudes;
  std::vector<double> frequencies;

  static DriveSignal mono(double hopping, double amplitude, double omega) {
    return DriveSignal{hopping, {amplitude}, {omega}}.validated();
  }
  static DriveSignal duo(double hopping, double amp_a, double amp_b, double omega1, double omega2) {
    return DriveSignal{hopping, {amp_a, amp_b}, {omega1, omega2}}.validated();
  }

  DriveSignal validated() const {
    if (amplitudes.size() != frequencies.size() || frequencies.empty()) {
      throw PreconditionError("DriveSignal: amplitudes and frequencies must pair up");
    }
    for (double w : frequencies) {
      if (!(w > 0.0)) throw PreconditionError("DriveSignal: frequencies must be positive");
    }
    return *this;
  }

  double signal(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) s += amplitudes[i] * std::cos(frequencies[i] * t);
    return s;
  }

  double max_frequency() const { return *std::max_element(frequencies.begin(), frequencies.end()); }
  /// Period of the first frequency; "n periods" always counts this one.
  double period() const { return 2.0 * std::numbers::pi / frequencies.front(); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State2> states;
  std::vector<double> left_population;  // |⟨L|ψ(t)⟩|²

  double max_norm_drift() const {
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, std::abs(s.norm() - 1.0));
    return worst;
  }
};

inline State2 basis_left() { return State2(1.0, 0.0); }
inline State2 basis_right() { return State2(0.0, 1.0); }

namespace detail {

// ψ' = −i H(t) ψ for the driven two-level Hamiltonian.
inline State2 two_level_rhs(const DriveSignal& drive, double t, const State2& psi) {
  const double half_s = 0.5 * drive.signal(t);
  const cplx minus_i(0.0, -1.0);
  return State2(minus_i * (half_s * psi(0) - drive.hopping * psi(1)),
                minus_i * (-drive.hopping * psi(0) - half_s * psi(1)));
}

inline State2 rk4_step(const DriveSignal& drive, double t, double dt, const State2& psi) {
  const State2 k1 = two_level_rhs(drive, t, psi);
  const State2 k2 = two_level_rhs(drive, t + 0.5 * dt, psi + 0.5 * dt * k1);
  const State2 k3 = two_level_rhs(drive, t + 0.5 * dt, psi + 0.5 * dt * k2);
  const State2 k4 = two_level_rhs(drive, t + dt, psi + dt * k3);
  return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_step(const DriveSignal& drive, double dt) {
  const double limit = (2.0 * std::numbers::pi / drive.max_frequency()) / 200.0;
  if (!(dt > 0.0)) throw PreconditionError("propagate: dt must be positive");
  if (dt > limit * (1.0 + 1e-12)) {
    throw PreconditionError("propagate: dt exceeds 1/200 of the shortest drive period");
  }
}

// Fixed steps of equal size no larger than dt covering [0, t_end].
inline std::pair<long, double> step_plan(double t_end, double dt) {
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
  return {steps, t_end / static_cast<double>(steps)};
}

}  // namespace detail

/// Classical fourth-order Runge–Kutta on iψ' = H(t)ψ, storing every step.
/// The state is never renormalized; norm drift is left as a diagnostic.
inline Trajectory propagate(const DriveSignal& drive, const State2& psi0, double t_end, double dt) {
  detail::check_step(drive, dt);
  if (!(t_end >= 0.0)) throw PreconditionError("propagate: t_end must be >= 0");
  const auto [steps, h] = detail::step_plan(t_end, dt);
  Trajectory tr;
  tr.times.reserve(static_cast<std::size_t>(steps + 1));
  tr.states.reserve(static_cast<std::size_t>(steps + 1));
  tr.left_population.reserve(static_cast<std::size_t>(steps + 1));
  State2 psi = psi0;
  tr.times.push_back(0.0);
  tr.states.push_back(psi);
  tr.left_population.push_back(std::norm(psi(0)));
  for (long k = 0; k < steps; ++k) {
    psi = detail::rk4_step(drive, static_cast<double>(k) * h, h, psi);
    tr.times.push_back(static_cast<double>(k + 1) * h);
    tr.states.push_back(psi);
    tr.left_population.push_back(std::norm(psi(0)));
  }
  return tr;
}

/// Final state only; same stepping as propagate.
inline State2 propagate_final(const DriveSignal& drive, const State2& psi0, double t_end, double dt) {
  detail::check_step(drive, dt);
  const auto [steps, h] = detail::step_plan(t_end, dt);
  State2 psi = psi0;
  for (long k = 0; k < steps; ++k) psi = detail::rk4_step(drive, static_cast<double>(k) * h, h, psi);
  return psi;
}

/// min_t P_L(t) over n_periods periods of the first drive frequency.
inline double min_left_population(const DriveSignal& drive, const State2& psi0, int n_periods, double dt) {
  if (n_periods < 1) throw PreconditionError("min_left_population: n_periods must be >= 1");
  detail::check_step(drive, dt);
  const auto [steps, h] = detail::step_plan(n_periods * drive.period(), dt);
  State2 psi = psi0;
  double lowest = std::norm(psi(0));
  for (long k = 0; k < steps; ++k) {
    psi = detail::rk4_step(drive, static_cast<double>(k) * h, h, psi);
    lowest = std::min(lowest, std::norm(psi(0)));
  }
  return lowest;
}

struct MonodromyResult {
  Eigen::Matrix2cd propagator;           // U(T)
  std::array<double, 2> quasienergies{};  // folded into [−Ω/2, Ω/2)
  double unitarity_error = 0.0;          // ‖U†U − I‖_F

  double smallest_abs() const { return std::min(std::abs(quasienergies[0]), std::abs(quasienergies[1])); }
  /// Circular distance between the two quasienergies.
  double gap(double omega) const {
    const double d = std::abs(quasienergies[0] - quasienergies[1]);
    return std::min(d, omega - d);
  }
};

/// One-period propagator and its quasienergies ε = −arg(μ)/T, folded.
inline MonodromyResult monodromy_quasienergies(const DriveSignal& drive, double dt) {
  if (drive.frequencies.size() != 1) {
    throw PreconditionError("monodromy_quasienergies: needs a single-frequency drive");
  }
  const double period = drive.period();
  MonodromyResult out;
  out.propagator.col(0) = propagate_final(drive, basis_left(), period, dt);
  out.propagator.col(1) = propagate_final(drive, basis_right(), period, dt);
  out.unitarity_error = (out.propagator.adjoint() * out.propagator - Eigen::Matrix2cd::Identity()).norm();
  if (out.unitarity_error > 1e-8) {
    throw AccuracyError("monodromy_quasienergies: U(T) not unitary to 1e-8, reduce dt");
  }
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(out.propagator, false);
  const double omega = drive.frequencies.front();
  for (int i = 0; i < 2; ++i) {
    out.quasienergies[static_cast<std::size_t>(i)] = fold_quasienergy(-std::arg(solver.eigenvalues()(i)) / period, omega);
  }
  return out;
}

}  // namespace genland
