#ifndef PERCOLAB_EUCLIDEAN_HPP_
#define PERCOLAB_EUCLIDEAN_HPP_

#include <cmath>
#include <numbers>
#include <string>

#include "percolab/rng.hpp"
#include "percolab/window.hpp"

namespace percolab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline std::string to_string(const Vec2& p) {
  return std::to_string(p.x) + " " + std::to_string(p.y);
}

// The Euclidean plane with Lebesgue measure, windowed to a disk.
class EuclideanPlane {
 public:
  using point_type = Vec2;
  static constexpr SpaceKind kind = SpaceKind::EuclideanPlane;
  static constexpr bool is_graph = false;

  explicit EuclideanPlane(WindowSpec<Vec2> window) : window_(window) {
    validate_window(window_);
  }

  const WindowSpec<Vec2>& window() const noexcept { return window_; }

  EuclideanPlane with_window(const WindowSpec<Vec2>& window) const {
    return EuclideanPlane(window);
  }

  double distance(const Vec2& p, const Vec2& q) const noexcept {
    return std::hypot(p.x - q.x, p.y - q.y);
  }

  // d(p, q) <= reach without a square root.
  bool within(const Vec2& p, const Vec2& q, double reach) const noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return dx * dx + dy * dy <= reach * reach;
  }

  double measure_ball(const Vec2& /*center*/, double r) const {
    require(r >= 0.0, "ball radius must be non-negative");
    return std::numbers::pi * r * r;
  }

  double radial(const Vec2& p) const noexcept {
    return distance(window_.center, p);
  }
  bool in_region(const Vec2& p) const noexcept {
    return within(window_.center, p, window_.outer());
  }
  bool in_window(const Vec2& p) const noexcept {
    return within(window_.center, p, window_.radius);
  }
  bool is_valid(const Vec2& p) const noexcept {
    return std::isfinite(p.x) && std::isfinite(p.y);
  }

  double region_measure() const { return measure_ball(window_.center, window_.outer()); }
  double window_measure() const { return measure_ball(window_.center, window_.radius); }

  // Uniform point of B(center, r) from two uniforms; u_radial drives the
  // radial CDF so callers can stratify on it.
  Vec2 ball_point(const Vec2& center, double r, double u_radial,
                  double u_angle) const noexcept {
    const double rho = r * std::sqrt(u_radial);
    const double phi = 2.0 * std::numbers::pi * u_angle;
    return {center.x + rho * std::cos(phi), center.y + rho * std::sin(phi)};
  }

  Vec2 sample_in_ball(const Vec2& center, double r, Stream& stream) const {
    const double u = stream.uniform();
    return ball_point(center, r, u, stream.uniform());
  }

  Vec2 sample_in_region(Stream& stream) const {
    return sample_in_ball(window_.center, window_.outer(), stream);
  }

 private:
  WindowSpec<Vec2> window_;
};

}  // namespace percolab

#endif  // PERCOLAB_EUCLIDEAN_HPP_
