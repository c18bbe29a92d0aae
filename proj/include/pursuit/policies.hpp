#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pursuit/controls.hpp"
#include "pursuit/dynamics.hpp"
#include "pursuit/random.hpp"
#include "pursuit/reachability.hpp"
#include "pursuit/state_space.hpp"
#include "pursuit/strategy.hpp"

namespace pursuit {

enum class PolicyKind { zero, constant, radial_extremal, random_admissible, z_boundary };

inline const char* policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::zero: return "zero";
    case PolicyKind::constant: return "constant";
    case PolicyKind::radial_extremal: return "radial-extremal";
    case PolicyKind::random_admissible: return "random-admissible";
    case PolicyKind::z_boundary: return "z-boundary";
  }
  throw std::logic_error("policy_kind_name: unreachable");
}

inline std::optional<PolicyKind> parse_policy_kind(const std::string& name) {
  for (PolicyKind kind : {PolicyKind::zero, PolicyKind::constant, PolicyKind::radial_extremal,
                          PolicyKind::random_admissible, PolicyKind::z_boundary})
    if (name == policy_kind_name(kind)) return kind;
  return std::nullopt;
}

/// Recipe for an admissible evader control. Field use by kind:
///   zero              -
///   constant          direction (non-zero), budget_fraction
///   radial-extremal   target (inside the evader's attainability ball)
///   random-admissible seed, budget_fraction
///   z-boundary        -
struct PolicySpec {
  PolicyKind kind = PolicyKind::zero;
  std::optional<StateVector> direction;
  std::optional<StateVector> target;
  std::uint64_t seed = 0;
  double budget_fraction = 1.0;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// The evader terminal target most adversarial to the phase constraint: the
/// point of the boundary hyperplane 2 (e0 - p0, target) = z_rhs nearest to
/// e0, clamped to the attainability ball along e0 - p0 when the hyperplane
/// misses the ball.
inline StateVector z_boundary_target(const GameParams& params) {
  const PhaseConstraint z = phase_constraint(params);
  const StateVector& d = z.direction;
  const StateVector e0 = params.reduced_e0();
  const double radius = evader_radius(params.upsilon(), params.phi());
  const double lambda = (0.5 * z.rhs - inner(d, e0)) / squared_norm(d);
  const StateVector candidate = e0 + d * lambda;
  if (in_ball(candidate, e0, radius)) return candidate;
  const double sign = lambda < 0.0 ? -1.0 : 1.0;
  return e0 + d * (sign * radius / norm(d));
}

namespace detail {

/// Exact-reach controls aimed at ball-boundary targets cost slightly more
/// than the budget energy at finite N (see exact_mode_energy_factor); pull
/// those back onto the budget so every policy is admissible.
inline ControlSignal clamp_to_budget(ControlSignal u, double budget) {
  if (l2_energy(u) > budget * budget) return scale_to_budget(u, budget);
  return u;
}

}  // namespace detail

/// Materialize a policy as a control signal on the requested grid. Every
/// built policy satisfies the evader's energy budget.
inline ControlSignal build_policy(const PolicySpec& spec, const GameParams& params,
                                  std::size_t grid_n) {
  if (!(spec.budget_fraction >= 0.0 && spec.budget_fraction <= 1.0))
    throw std::invalid_argument("build_policy: budget_fraction must be in [0, 1]");
  const double phi = params.phi();
  const std::size_t dim = params.dim();

  switch (spec.kind) {
    case PolicyKind::zero:
      return ControlSignal::zero(dim, grid_n, phi);

    case PolicyKind::constant: {
      if (!spec.direction) throw std::invalid_argument("build_policy: constant needs direction");
      const double len = norm(*spec.direction);
      if (len == 0.0)
        throw std::invalid_argument("build_policy: constant direction must be non-zero");
      if (spec.direction->dim() != dim)
        throw std::invalid_argument("build_policy: direction dimension mismatch");
      const double magnitude = spec.budget_fraction * params.upsilon() / std::sqrt(phi);
      return ControlSignal::constant(*spec.direction * (magnitude / len), grid_n, phi);
    }

    case PolicyKind::radial_extremal: {
      if (!spec.target) throw std::invalid_argument("build_policy: radial-extremal needs target");
      return detail::clamp_to_budget(
          extremal_evader_control(params, *spec.target, grid_n, ExtremalMode::exact),
          params.upsilon());
    }

    case PolicyKind::random_admissible: {
      if (spec.budget_fraction == 0.0) return ControlSignal::zero(dim, grid_n, phi);
      SplitMix64 rng(spec.seed);
      std::vector<StateVector> values;
      values.reserve(grid_n);
      for (std::size_t k = 0; k < grid_n; ++k) {
        std::vector<double> coords(dim);
        for (double& c : coords) c = rng.next_double(-1.0, 1.0);
        values.emplace_back(std::move(coords));
      }
      return scale_to_budget(ControlSignal(std::move(values), phi),
                             spec.budget_fraction * params.upsilon());
    }

    case PolicyKind::z_boundary:
      return detail::clamp_to_budget(
          extremal_evader_control(params, z_boundary_target(params), grid_n,
                                  ExtremalMode::exact),
          params.upsilon());
  }
  throw std::logic_error("build_policy: unreachable");
}

}  // namespace pursuit
