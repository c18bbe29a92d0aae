#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace pursuit {

inline constexpr std::size_t kMaxSteps = std::size_t{1} << 20;

/// Uniform grid 0 = t_0 < t_1 < ... < t_N = horizon together with the exact
/// per-piece integrals that make piecewise-constant control integration
/// closed-form. time(N) equals the horizon exactly (N/N == 1), so sums over
/// pieces telescope to the full-interval values.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
      throw std::invalid_argument("TimeGrid: horizon must be finite and > 0");
    if (steps < 1 || steps > kMaxSteps)
      throw std::invalid_argument("TimeGrid: steps must be in [1, " +
                                  std::to_string(kMaxSteps) + "]");
  }

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }

  /// Nominal piece length horizon/N (used for index lookup).
  double dt() const { return horizon_ / static_cast<double>(steps_); }

  double time(std::size_t k) const {
    return horizon_ * (static_cast<double>(k) / static_cast<double>(steps_));
  }

  double piece_dt(std::size_t k) const { return time(k + 1) - time(k); }

  /// Exact integral of (horizon - t) over piece k.
  double linear_weight(std::size_t k) const {
    const double r0 = horizon_ - time(k);
    const double r1 = horizon_ - time(k + 1);
    return 0.5 * (r0 - r1) * (r0 + r1);
  }

  /// Exact integral of (horizon - t)^2 over piece k.
  double quadratic_weight(std::size_t k) const {
    const double r0 = horizon_ - time(k);
    const double r1 = horizon_ - time(k + 1);
    return (r0 - r1) * (r0 * r0 + r0 * r1 + r1 * r1) / 3.0;
  }

  /// Index of the piece containing t; the right endpoint maps to the last piece.
  std::size_t piece_index(double t) const {
    if (!std::isfinite(t) || t < 0.0 || t > horizon_)
      throw std::invalid_argument("TimeGrid: time outside [0, horizon]");
    const auto k = static_cast<std::size_t>(t / dt());
    return k >= steps_ ? steps_ - 1 : k;
  }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.horizon_ == b.horizon_ && a.steps_ == b.steps_;
  }

 private:
  double horizon_;
  std::size_t steps_;
};

}  // namespace pursuit
