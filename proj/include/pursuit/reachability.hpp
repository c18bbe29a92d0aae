#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pursuit/controls.hpp"
#include "pursuit/dynamics.hpp"
#include "pursuit/state_space.hpp"

namespace pursuit {

enum class Role { pursuer, evader };

/// An attainability ball: everything one player can reach at time phi.
struct ReachSpec {
  StateVector center;
  double radius;
  Role role;
};

/// Radius of the pursuer's attainability ball: gamma * sqrt(phi).
inline double pursuer_radius(double gamma, double phi) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("pursuer_radius: gamma must be finite and > 0");
  if (!(phi > 0.0) || !std::isfinite(phi))
    throw std::invalid_argument("pursuer_radius: phi must be finite and > 0");
  return gamma * std::sqrt(phi);
}

/// Radius of the evader's attainability ball: upsilon * sqrt(phi^3 / 3).
inline double evader_radius(double upsilon, double phi) {
  if (!(upsilon > 0.0) || !std::isfinite(upsilon))
    throw std::invalid_argument("evader_radius: upsilon must be finite and > 0");
  if (!(phi > 0.0) || !std::isfinite(phi))
    throw std::invalid_argument("evader_radius: phi must be finite and > 0");
  return upsilon * std::sqrt(phi * phi * phi / 3.0);
}

inline ReachSpec attainability_ball(const GameParams& params, Role role) {
  if (role == Role::pursuer)
    return {params.p0(), pursuer_radius(params.gamma(), params.phi()), role};
  return {params.reduced_e0(), evader_radius(params.upsilon(), params.phi()), role};
}

/// Constant control (target - p0) / phi: reaches the target exactly with
/// energy |target - p0|^2 / phi <= gamma^2 for targets in the ball.
inline ControlSignal extremal_pursuer_control(const GameParams& params, const StateVector& target,
                                              std::size_t grid_n) {
  const ReachSpec ball = attainability_ball(params, Role::pursuer);
  if (!in_ball(target, ball.center, ball.radius))
    throw std::invalid_argument(
        "extremal_pursuer_control: target outside the attainability ball");
  const StateVector value = (target - params.p0()) * (1.0 / params.phi());
  return ControlSignal::constant(value, grid_n, params.phi());
}

enum class ExtremalMode { sampled, exact };

/// Relative energy factor of the exact-mode control against the continuous
/// extremal one: reaching a target exactly with N pieces costs
/// 1 / (1 - 1/(4 N^2)) times the continuous minimum-energy value.
inline double exact_mode_energy_factor(std::size_t grid_n) {
  const double n = static_cast<double>(grid_n);
  return 1.0 / (1.0 - 1.0 / (4.0 * n * n));
}

/// Evader control steering the reduced state to `target`.
///
/// sampled: the continuous control 3 (phi - t) (target - e0) / phi^3 sampled
/// at piece midpoints; terminal miss is O(dt^2).
///
/// exact: the minimum-l2-energy piecewise-constant control with exact reach,
/// nu_k proportional to the piece weight w_k and normalized so that
/// sum_k nu_k w_k = target - e0. Converges pointwise to the sampled formula
/// as N grows; its energy decreases to the continuous minimum
/// 3 |target - e0|^2 / phi^3 from above (see exact_mode_energy_factor).
inline ControlSignal extremal_evader_control(const GameParams& params, const StateVector& target,
                                             std::size_t grid_n,
                                             ExtremalMode mode = ExtremalMode::exact) {
  const ReachSpec ball = attainability_ball(params, Role::evader);
  if (!in_ball(target, ball.center, ball.radius))
    throw std::invalid_argument(
        "extremal_evader_control: target outside the attainability ball");
  const double phi = params.phi();
  const StateVector d = target - ball.center;
  const TimeGrid grid(phi, grid_n);

  std::vector<StateVector> values;
  values.reserve(grid_n);
  if (mode == ExtremalMode::sampled) {
    const double cube = phi * phi * phi;
    for (std::size_t k = 0; k < grid_n; ++k) {
      const double t_mid = 0.5 * (grid.time(k) + grid.time(k + 1));
      values.push_back(d * (3.0 * (phi - t_mid) / cube));
    }
  } else {
    double weight_sq_sum = 0.0;
    for (std::size_t k = 0; k < grid_n; ++k) {
      const double w = grid.linear_weight(k);
      weight_sq_sum += w * w;
    }
    for (std::size_t k = 0; k < grid_n; ++k)
      values.push_back(d * (grid.linear_weight(k) / weight_sq_sum));
  }
  return ControlSignal(std::move(values), phi);
}

struct ReachReport {
  Role role;
  StateVector terminal;
  double miss = 0.0;          // distance from terminal point to target
  double energy = 0.0;        // l2 energy of the constructed control
  double budget_sq = 0.0;     // gamma^2 or upsilon^2
  double energy_bound = 0.0;  // sharp admissible energy for this control class
  bool reached = false;       // miss <= 1e-12 (1 + |target|)
  bool admissible = false;    // energy <= budget^2 (1 + 1e-9)
  bool ok = false;            // reached && energy <= energy_bound
};

/// Build the role's extremal control (exact mode for the evader), simulate
/// it, and check both the reach and the energy claims. The evader's energy is
/// compared against the control class's sharp bound: exact reach of a ball
/// boundary point with N pieces needs exact_mode_energy_factor(N) times the
/// budget energy, which tends to 1 as the grid refines.
inline ReachReport verify_reach(const GameParams& params, Role role, const StateVector& target,
                                std::size_t grid_n) {
  const double budget = role == Role::pursuer ? params.gamma() : params.upsilon();
  const ControlSignal zero = ControlSignal::zero(params.dim(), grid_n, params.phi());

  if (role == Role::pursuer) {
    const ControlSignal mu = extremal_pursuer_control(params, target, grid_n);
    const Trajectory traj = simulate_reduced(params, mu, zero);
    ReachReport report{role, traj.terminal_p()};
    report.miss = distance(report.terminal, target);
    report.energy = l2_energy(mu);
    report.budget_sq = budget * budget;
    report.energy_bound = report.budget_sq + energy_tolerance(budget);
    report.reached = report.miss <= 1e-12 * (1.0 + norm(target));
    report.admissible = is_admissible(mu, budget).admissible;
    report.ok = report.reached && report.energy <= report.energy_bound;
    return report;
  }

  const ControlSignal nu = extremal_evader_control(params, target, grid_n, ExtremalMode::exact);
  const Trajectory traj = simulate_reduced(params, zero, nu);
  ReachReport report{role, traj.terminal_e()};
  report.miss = distance(report.terminal, target);
  report.energy = l2_energy(nu);
  report.budget_sq = budget * budget;
  report.energy_bound =
      report.budget_sq * exact_mode_energy_factor(grid_n) + energy_tolerance(budget);
  report.reached = report.miss <= 1e-12 * (1.0 + norm(target));
  report.admissible = is_admissible(nu, budget).admissible;
  report.ok = report.reached && report.energy <= report.energy_bound;
  return report;
}

}  // namespace pursuit
