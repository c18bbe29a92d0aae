#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pursuit {

/// Hard cap on the coordinate dimension of one game instance.
inline constexpr std::size_t kMaxDimension = 1024;

/// Closed-ball membership slack: absorbs accumulated rounding in
/// terminal-state computations.
inline double ball_tolerance(double radius) { return 1e-9 * (1.0 + radius); }

/// A point of the truncated coordinate space: the first m coordinates of a
/// square-summable sequence. Immutable in spirit; every mutating operator
/// preserves dimension and finiteness of the operands it was built from.
class StateVector {
 public:
  StateVector(std::initializer_list<double> coords)
      : StateVector(std::vector<double>(coords)) {}

  explicit StateVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("StateVector: dimension must be >= 1");
    if (coords_.size() > kMaxDimension)
      throw std::invalid_argument("StateVector: dimension exceeds cap " +
                                  std::to_string(kMaxDimension));
    for (double c : coords_)
      if (!std::isfinite(c)) throw std::invalid_argument("StateVector: non-finite coordinate");
  }

  static StateVector zero(std::size_t dim) { return StateVector(std::vector<double>(dim, 0.0)); }

  /// Unit vector along coordinate axis `axis` (0-based).
  static StateVector axis(std::size_t dim, std::size_t axis) {
    std::vector<double> c(dim, 0.0);
    c.at(axis) = 1.0;
    return StateVector(std::move(c));
  }

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  StateVector& operator+=(const StateVector& rhs) {
    check_same_dim(rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
    return *this;
  }

  StateVector& operator-=(const StateVector& rhs) {
    check_same_dim(rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
    return *this;
  }

  StateVector& operator*=(double s) {
    for (double& c : coords_) c *= s;
    return *this;
  }

  /// In-place a += s*b; the workhorse of the exact per-piece updates.
  StateVector& add_scaled(const StateVector& b, double s) {
    check_same_dim(b);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += s * b.coords_[i];
    return *this;
  }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.coords_ == b.coords_;
  }

 private:
  void check_same_dim(const StateVector& other) const {
    if (coords_.size() != other.coords_.size())
      throw std::invalid_argument("StateVector: dimension mismatch (" +
                                  std::to_string(coords_.size()) + " vs " +
                                  std::to_string(other.coords_.size()) + ")");
  }

  std::vector<double> coords_;
};

inline StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
inline StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
inline StateVector operator*(StateVector a, double s) { return a *= s; }
inline StateVector operator*(double s, StateVector a) { return a *= s; }

/// Sum of coordinatewise products, accumulated in ascending index order so
/// results are reproducible across runs.
inline double inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner: dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double squared_norm(const StateVector& a) { return inner(a, a); }

inline double norm(const StateVector& a) { return std::sqrt(squared_norm(a)); }

inline double distance(const StateVector& a, const StateVector& b) { return norm(a - b); }

/// Closed-ball membership with the standard slack.
inline bool in_ball(const StateVector& x, const StateVector& center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("in_ball: radius must be finite and >= 0");
  return distance(x, center) <= radius + ball_tolerance(radius);
}

}  // namespace pursuit
