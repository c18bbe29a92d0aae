#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pursuit/state_space.hpp"
#include "pursuit/time_grid.hpp"

namespace pursuit {

/// Admissibility slack so extremal controls sitting exactly on the budget
/// boundary do not fail from rounding.
inline double energy_tolerance(double budget) { return 1e-9 * budget * budget; }

/// A piecewise-constant vector-valued control on a uniform grid over
/// [0, horizon]. values[k] holds on [t_k, t_{k+1}); evaluation at the right
/// endpoint returns the last piece.
class ControlSignal {
 public:
  ControlSignal(std::vector<StateVector> values, double horizon)
      : values_(std::move(values)), grid_(horizon, values_.empty() ? 1 : values_.size()) {
    if (values_.empty()) throw std::invalid_argument("ControlSignal: needs at least one piece");
    for (const StateVector& v : values_)
      if (v.dim() != values_.front().dim())
        throw std::invalid_argument("ControlSignal: pieces must share one dimension");
  }

  static ControlSignal zero(std::size_t dim, std::size_t steps, double horizon) {
    return ControlSignal(std::vector<StateVector>(steps, StateVector::zero(dim)), horizon);
  }

  static ControlSignal constant(const StateVector& value, std::size_t steps, double horizon) {
    return ControlSignal(std::vector<StateVector>(steps, value), horizon);
  }

  std::size_t steps() const { return values_.size(); }
  std::size_t dim() const { return values_.front().dim(); }
  double horizon() const { return grid_.horizon(); }
  const TimeGrid& grid() const { return grid_; }
  const std::vector<StateVector>& values() const { return values_; }
  const StateVector& value(std::size_t k) const { return values_.at(k); }

  /// Value at time t in [0, horizon].
  const StateVector& eval(double t) const { return values_[grid_.piece_index(t)]; }

  friend bool operator==(const ControlSignal& a, const ControlSignal& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  std::vector<StateVector> values_;
  TimeGrid grid_;
};

struct EnergyReport {
  double l2_energy = 0.0;        // integral of |u|^2
  double weighted_energy = 0.0;  // integral of (horizon-t)^2 |u|^2
  double quartic_energy = 0.0;   // integral of |u|^4
  double budget = 0.0;
  bool admissible = false;
};

/// Exact integral of the squared norm: sum_k |u_k|^2 dt_k.
inline double l2_energy(const ControlSignal& u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < u.steps(); ++k)
    acc += squared_norm(u.value(k)) * u.grid().piece_dt(k);
  return acc;
}

/// Exact integral of (horizon-t)^2 |u(t)|^2 via per-piece cubic weights.
inline double weighted_energy(const ControlSignal& u, double horizon) {
  if (u.horizon() != horizon)
    throw std::invalid_argument("weighted_energy: horizon mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < u.steps(); ++k)
    acc += squared_norm(u.value(k)) * u.grid().quadratic_weight(k);
  return acc;
}

/// Exact integral of |u(t)|^4. Feeds the diagnostic bound chain only.
inline double quartic_energy(const ControlSignal& u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < u.steps(); ++k) {
    const double s = squared_norm(u.value(k));
    acc += s * s * u.grid().piece_dt(k);
  }
  return acc;
}

/// Definition of an admissible control: l2 energy at most budget^2 (same
/// functional form for both players, with their respective budgets).
inline EnergyReport is_admissible(const ControlSignal& u, double budget) {
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("is_admissible: budget must be finite and > 0");
  EnergyReport report;
  report.l2_energy = l2_energy(u);
  report.weighted_energy = weighted_energy(u, u.horizon());
  report.quartic_energy = quartic_energy(u);
  report.budget = budget;
  report.admissible = report.l2_energy <= budget * budget + energy_tolerance(budget);
  return report;
}

inline ControlSignal operator*(const ControlSignal& u, double s) {
  std::vector<StateVector> scaled = u.values();
  for (StateVector& v : scaled) v *= s;
  return ControlSignal(std::move(scaled), u.horizon());
}

inline ControlSignal operator*(double s, const ControlSignal& u) { return u * s; }

/// Pointwise sum of two signals on the same grid.
inline ControlSignal operator+(const ControlSignal& a, const ControlSignal& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("ControlSignal: grids must match for addition");
  std::vector<StateVector> sum = a.values();
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += b.value(k);
  return ControlSignal(std::move(sum), a.horizon());
}

/// Rescale so the l2 energy equals budget^2 exactly (up to rounding).
inline ControlSignal scale_to_budget(const ControlSignal& u, double budget) {
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("scale_to_budget: budget must be finite and > 0");
  const double energy = l2_energy(u);
  if (energy == 0.0)
    throw std::invalid_argument("scale_to_budget: cannot normalize the zero signal");
  return u * (budget / std::sqrt(energy));
}

}  // namespace pursuit
