#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pursuit/controls.hpp"
#include "pursuit/dynamics.hpp"
#include "pursuit/state_space.hpp"

namespace pursuit {

/// Raised where the phase-constraint set is undefined (coinciding reduced
/// initial states).
class degenerate_configuration_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Capture is an exact identity in the discrete model; the tolerance only
/// absorbs rounding.
inline double capture_tolerance(const GameParams& params) {
  return 1e-9 * (1.0 + norm(params.reduced_e0()) + norm(params.p0()));
}

inline double z_tolerance(double rhs) { return 1e-12 * (1.0 + std::abs(rhs)); }

namespace detail {

inline double sqrt_quintic_over_5(double phi) {
  const double p2 = phi * phi;
  return std::sqrt(p2 * p2 * phi / 5.0);
}

}  // namespace detail

/// Right-hand side of the phase-constraint inequality,
///   phi (gamma^2 - upsilon^2 sqrt(phi^5 / 5)) + |e0|^2 - |p0|^2,
/// written out on raw inputs so the upsilon -> 0 limit is directly testable.
inline double z_rhs_value(double phi, double gamma, double upsilon, const StateVector& e0,
                          const StateVector& p0) {
  return phi * (gamma * gamma - upsilon * upsilon * detail::sqrt_quintic_over_5(phi)) +
         squared_norm(e0) - squared_norm(p0);
}

inline double z_rhs(const GameParams& params) {
  return z_rhs_value(params.phi(), params.gamma(), params.upsilon(), params.reduced_e0(),
                     params.p0());
}

/// The half-space 2 (e0 - p0, zeta) <= rhs that the terminal evader state
/// must satisfy for the winning-strategy guarantee. Defined only for
/// e0 != p0.
struct PhaseConstraint {
  StateVector direction;  // e0 - p0
  double rhs;
};

inline PhaseConstraint phase_constraint(const GameParams& params) {
  StateVector direction = params.reduced_e0() - params.p0();
  if (norm(direction) == 0.0)
    throw degenerate_configuration_error(
        "phase constraint undefined: reduced evader start equals pursuer start");
  return {std::move(direction), z_rhs(params)};
}

inline bool in_phase_constraint(const StateVector& zeta, const GameParams& params) {
  const PhaseConstraint z = phase_constraint(params);
  return 2.0 * inner(z.direction, zeta) <= z.rhs + z_tolerance(z.rhs);
}

/// The pursuer's counter-strategy value (e0 - p0) / phi + (phi - t) nu(t).
/// The pursuer reads the evader's current control value, matching the
/// information pattern of a counter-strategy.
inline StateVector strategy_value(const GameParams& params, const StateVector& nu_value,
                                  double t) {
  StateVector out = (params.reduced_e0() - params.p0()) * (1.0 / params.phi());
  out.add_scaled(nu_value, params.phi() - t);
  return out;
}

/// One inequality of the admissibility argument: passes when lhs <= rhs + tol.
struct ChainLine {
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// The four lines of the strategy-admissibility argument.
///   z_margin:       2 (e0-p0, I) <= phi (G^2 - U^2 sqrt(phi^5/5)) - |e0-p0|^2
///                   with I the weighted control integral; equivalent to the
///                   terminal state satisfying the phase constraint.
///   cauchy_schwarz: weighted energy <= sqrt(phi^5/5) sqrt(quartic energy).
///   quartic_budget: sqrt(quartic energy) <= U^2. DIAGNOSTIC ONLY: this step
///                   does not follow from the energy budget and can fail for
///                   admissible controls that concentrate energy in time.
///   conclusion:     strategy energy <= G^2 (same predicate as
///                   strategy_admissible).
struct ChainDiagnostic {
  ChainLine z_margin;
  ChainLine cauchy_schwarz;
  ChainLine quartic_budget;
  ChainLine conclusion;

  bool premises_pass() const {
    return z_margin.pass && cauchy_schwarz.pass && quartic_budget.pass;
  }
  bool all_pass() const { return premises_pass() && conclusion.pass; }
};

struct PursuitReport {
  bool captured = false;
  double miss = 0.0;
  double strategy_energy = 0.0;
  bool strategy_admissible = false;
  bool evader_admissible = false;
  std::optional<bool> z_satisfied;  // empty when the phase constraint is undefined
  ChainDiagnostic chain;
  Trajectory trajectory;  // pursuer under the strategy; evader under its own dynamics
};

namespace detail {

/// Weighted control integral I = sum_k nu_k w_k (= integral of (phi-t) nu).
inline StateVector weighted_control_integral(const ControlSignal& nu) {
  StateVector acc = StateVector::zero(nu.dim());
  for (std::size_t k = 0; k < nu.steps(); ++k)
    acc.add_scaled(nu.value(k), nu.grid().linear_weight(k));
  return acc;
}

inline ChainDiagnostic evaluate_chain(const GameParams& params, const ControlSignal& nu,
                                      const StateVector& weighted_integral,
                                      double strategy_energy) {
  const double phi = params.phi();
  const double gamma_sq = params.gamma() * params.gamma();
  const double upsilon_sq = params.upsilon() * params.upsilon();
  const double s5 = sqrt_quintic_over_5(phi);
  const StateVector d = params.reduced_e0() - params.p0();

  const auto line = [](double lhs, double rhs) {
    ChainLine l{lhs, rhs, 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs)), false};
    l.pass = l.lhs <= l.rhs + l.tol;
    return l;
  };

  ChainDiagnostic chain;
  chain.z_margin = line(2.0 * inner(d, weighted_integral),
                        phi * (gamma_sq - upsilon_sq * s5) - squared_norm(d));
  const double quartic = quartic_energy(nu);
  chain.cauchy_schwarz = line(weighted_energy(nu, phi), s5 * std::sqrt(quartic));
  chain.quartic_budget = line(std::sqrt(quartic), upsilon_sq);
  chain.conclusion = ChainLine{strategy_energy, gamma_sq, energy_tolerance(params.gamma()),
                               strategy_energy <= gamma_sq + energy_tolerance(params.gamma())};
  return chain;
}

}  // namespace detail

/// Numerically evaluate each line of the admissibility argument for a given
/// evader control.
inline ChainDiagnostic check_admissibility_chain(const GameParams& params,
                                                 const ControlSignal& nu) {
  detail::check_signal(params, nu);
  const StateVector integral = detail::weighted_control_integral(nu);
  const StateVector d = params.reduced_e0() - params.p0();
  const double phi = params.phi();
  const double strategy_energy =
      squared_norm(d) / phi + (2.0 / phi) * inner(d, integral) + weighted_energy(nu, phi);
  return detail::evaluate_chain(params, nu, integral, strategy_energy);
}

/// Exact l2 energy of the realized strategy, accumulated piece by piece from
/// the strategy values: on piece k the strategy is a + (phi - t) nu_k with
/// a = (e0 - p0)/phi, and
///   integral |a + (phi - t) nu_k|^2
///     = |a|^2 dt_k + 2 (a, nu_k) w_k + |nu_k|^2 q_k
/// with w_k, q_k the exact linear and quadratic piece weights. Agrees with
/// the expanded three-term total reported by run_pursuit up to rounding.
inline double assembled_strategy_energy(const GameParams& params, const ControlSignal& nu) {
  detail::check_signal(params, nu);
  const StateVector a = (params.reduced_e0() - params.p0()) * (1.0 / params.phi());
  const double a_sq = squared_norm(a);
  double acc = 0.0;
  for (std::size_t k = 0; k < nu.steps(); ++k) {
    const StateVector& v = nu.value(k);
    acc += a_sq * nu.grid().piece_dt(k) + 2.0 * inner(a, v) * nu.grid().linear_weight(k) +
           squared_norm(v) * nu.grid().quadratic_weight(k);
  }
  return acc;
}

/// Play the counter-strategy against the given evader control.
///
/// The pursuer's piece-k displacement integrates the strategy exactly:
/// (e0 - p0) dt_k / phi + nu_k w_k. Its terminal state therefore telescopes
/// to p0 + (e0 - p0) + sum_k nu_k w_k, the evader's terminal state, and
/// capture holds by construction; the reported miss is measured against the
/// evader simulated under its own second-order dynamics. The reported
/// strategy energy is the exact expansion
///   |e0-p0|^2/phi + (2/phi) (e0-p0, I) + weighted_energy(nu)
/// and the phase-constraint flag is evaluated on the realized terminal
/// evader state (empty when e0 = p0, where the constraint is undefined).
inline PursuitReport run_pursuit(const GameParams& params, const ControlSignal& nu) {
  detail::check_signal(params, nu);
  const TimeGrid& grid = nu.grid();
  const std::size_t n = grid.steps();
  const double phi = params.phi();
  const StateVector e0 = params.reduced_e0();
  const StateVector d = e0 - params.p0();
  const StateVector a = d * (1.0 / phi);

  PursuitReport report;
  Trajectory& traj = report.trajectory;
  traj.times.reserve(n + 1);
  traj.p.reserve(n + 1);
  traj.e.reserve(n + 1);
  traj.e_vel.emplace();
  traj.e_vel->reserve(n + 1);

  StateVector p = params.p0();
  StateVector e = params.e_pos0();
  StateVector v = params.e_vel0();
  StateVector integral = StateVector::zero(params.dim());
  traj.times.push_back(0.0);
  traj.p.push_back(p);
  traj.e.push_back(e);
  traj.e_vel->push_back(v);

  for (std::size_t k = 0; k < n; ++k) {
    const double dt = grid.piece_dt(k);
    const double w = grid.linear_weight(k);
    const StateVector& nu_k = nu.value(k);
    p.add_scaled(a, dt);
    p.add_scaled(nu_k, w);
    e.add_scaled(v, dt);
    e.add_scaled(nu_k, 0.5 * dt * dt);
    v.add_scaled(nu_k, dt);
    integral.add_scaled(nu_k, w);
    traj.times.push_back(grid.time(k + 1));
    traj.p.push_back(p);
    traj.e.push_back(e);
    traj.e_vel->push_back(v);
  }

  report.miss = distance(p, e);
  report.captured = report.miss <= capture_tolerance(params);
  report.strategy_energy =
      squared_norm(d) / phi + (2.0 / phi) * inner(d, integral) + weighted_energy(nu, phi);
  report.strategy_admissible =
      report.strategy_energy <= params.gamma() * params.gamma() + energy_tolerance(params.gamma());
  report.evader_admissible = is_admissible(nu, params.upsilon()).admissible;
  if (norm(d) > 0.0) report.z_satisfied = in_phase_constraint(e, params);
  report.chain = detail::evaluate_chain(params, nu, integral, report.strategy_energy);
  return report;
}

}  // namespace pursuit
