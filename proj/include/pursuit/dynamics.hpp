#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pursuit/controls.hpp"
#include "pursuit/state_space.hpp"
#include "pursuit/time_grid.hpp"

namespace pursuit {

/// Initial state under the first-order reduction: e0 = e_pos0 + phi * e_vel0.
inline StateVector reduce_initial_state(const StateVector& e_pos0, const StateVector& e_vel0,
                                        double phi) {
  StateVector e0 = e_pos0;
  e0.add_scaled(e_vel0, phi);
  return e0;
}

/// One game instance: horizon, both players' energy budgets, and the initial
/// states of the velocity-controlled pursuer and the acceleration-controlled
/// evader.
class GameParams {
 public:
  GameParams(double phi, double gamma, double upsilon, StateVector p0, StateVector e_pos0,
             StateVector e_vel0)
      : phi_(phi),
        gamma_(gamma),
        upsilon_(upsilon),
        p0_(std::move(p0)),
        e_pos0_(std::move(e_pos0)),
        e_vel0_(std::move(e_vel0)) {
    if (!(phi_ > 0.0) || !std::isfinite(phi_))
      throw std::invalid_argument("GameParams: phi must be finite and > 0");
    if (!(gamma_ > 0.0) || !std::isfinite(gamma_))
      throw std::invalid_argument("GameParams: gamma must be finite and > 0");
    if (!(upsilon_ > 0.0) || !std::isfinite(upsilon_))
      throw std::invalid_argument("GameParams: upsilon must be finite and > 0");
    if (e_pos0_.dim() != p0_.dim() || e_vel0_.dim() != p0_.dim())
      throw std::invalid_argument("GameParams: initial states must share one dimension");
  }

  double phi() const { return phi_; }
  double gamma() const { return gamma_; }
  double upsilon() const { return upsilon_; }
  std::size_t dim() const { return p0_.dim(); }
  const StateVector& p0() const { return p0_; }
  const StateVector& e_pos0() const { return e_pos0_; }
  const StateVector& e_vel0() const { return e_vel0_; }

  /// Reduced evader initial state e0 = e_pos0 + phi * e_vel0.
  StateVector reduced_e0() const { return reduce_initial_state(e_pos0_, e_vel0_, phi_); }

  friend bool operator==(const GameParams& a, const GameParams& b) {
    return a.phi_ == b.phi_ && a.gamma_ == b.gamma_ && a.upsilon_ == b.upsilon_ &&
           a.p0_ == b.p0_ && a.e_pos0_ == b.e_pos0_ && a.e_vel0_ == b.e_vel0_;
  }

 private:
  double phi_;
  double gamma_;
  double upsilon_;
  StateVector p0_;
  StateVector e_pos0_;
  StateVector e_vel0_;
};

/// Grid-sampled motions of both players. e_vel is filled by the original
/// (second-order) simulation only.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> p;
  std::vector<StateVector> e;
  std::optional<std::vector<StateVector>> e_vel;

  const StateVector& terminal_p() const { return p.back(); }
  const StateVector& terminal_e() const { return e.back(); }
};

namespace detail {

inline void check_signals(const GameParams& params, const ControlSignal& mu,
                          const ControlSignal& nu) {
  if (!(mu.grid() == nu.grid()))
    throw std::invalid_argument("simulate: mu and nu must share one grid");
  if (mu.horizon() != params.phi())
    throw std::invalid_argument("simulate: signal horizon must equal phi");
  if (mu.dim() != params.dim() || nu.dim() != params.dim())
    throw std::invalid_argument("simulate: signal dimension must match params");
}

inline void check_signal(const GameParams& params, const ControlSignal& nu) {
  if (nu.horizon() != params.phi())
    throw std::invalid_argument("simulate: signal horizon must equal phi");
  if (nu.dim() != params.dim())
    throw std::invalid_argument("simulate: signal dimension must match params");
}

}  // namespace detail

/// The original hybrid game: first-order pursuer, second-order evader.
/// Per-piece updates are the exact solution for piecewise-constant controls:
///   p_{k+1} = p_k + mu_k dt
///   v_{k+1} = v_k + nu_k dt
///   e_{k+1} = e_k + v_k dt + nu_k dt^2 / 2
inline Trajectory simulate_original(const GameParams& params, const ControlSignal& mu,
                                    const ControlSignal& nu) {
  detail::check_signals(params, mu, nu);
  const TimeGrid& grid = mu.grid();
  const std::size_t n = grid.steps();

  Trajectory traj;
  traj.times.reserve(n + 1);
  traj.p.reserve(n + 1);
  traj.e.reserve(n + 1);
  traj.e_vel.emplace();
  traj.e_vel->reserve(n + 1);

  StateVector p = params.p0();
  StateVector e = params.e_pos0();
  StateVector v = params.e_vel0();
  traj.times.push_back(0.0);
  traj.p.push_back(p);
  traj.e.push_back(e);
  traj.e_vel->push_back(v);

  for (std::size_t k = 0; k < n; ++k) {
    const double dt = grid.piece_dt(k);
    p.add_scaled(mu.value(k), dt);
    e.add_scaled(v, dt);
    e.add_scaled(nu.value(k), 0.5 * dt * dt);
    v.add_scaled(nu.value(k), dt);
    traj.times.push_back(grid.time(k + 1));
    traj.p.push_back(p);
    traj.e.push_back(e);
    traj.e_vel->push_back(v);
  }
  return traj;
}

/// The equivalent first-order game: the evader moves with velocity
/// (phi - t) nu(t) from e0 = e_pos0 + phi e_vel0. The per-piece displacement
/// weight w_k = integral of (phi - t) over the piece makes the update exact.
inline Trajectory simulate_reduced(const GameParams& params, const ControlSignal& mu,
                                   const ControlSignal& nu) {
  detail::check_signals(params, mu, nu);
  const TimeGrid& grid = mu.grid();
  const std::size_t n = grid.steps();

  Trajectory traj;
  traj.times.reserve(n + 1);
  traj.p.reserve(n + 1);
  traj.e.reserve(n + 1);

  StateVector p = params.p0();
  StateVector e = params.reduced_e0();
  traj.times.push_back(0.0);
  traj.p.push_back(p);
  traj.e.push_back(e);

  for (std::size_t k = 0; k < n; ++k) {
    p.add_scaled(mu.value(k), grid.piece_dt(k));
    e.add_scaled(nu.value(k), grid.linear_weight(k));
    traj.times.push_back(grid.time(k + 1));
    traj.p.push_back(p);
    traj.e.push_back(e);
  }
  return traj;
}

/// Distance between the terminal evader states of the original and reduced
/// simulations under the same nu. Both equal
/// e_pos0 + phi e_vel0 + sum_k nu_k w_k analytically, so the result is pure
/// rounding noise.
inline double check_equivalence(const GameParams& params, const ControlSignal& nu) {
  detail::check_signal(params, nu);
  const ControlSignal mu = ControlSignal::zero(params.dim(), nu.steps(), params.phi());
  const Trajectory original = simulate_original(params, mu, nu);
  const Trajectory reduced = simulate_reduced(params, mu, nu);
  return distance(original.terminal_e(), reduced.terminal_e());
}

}  // namespace pursuit
