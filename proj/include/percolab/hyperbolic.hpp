#ifndef PERCOLAB_HYPERBOLIC_HPP_
#define PERCOLAB_HYPERBOLIC_HPP_

#include <cmath>
#include <numbers>
#include <string>

#include "percolab/rng.hpp"
#include "percolab/window.hpp"

namespace percolab {

// Geodesic polar coordinates about the window center.
struct Polar {
  double r = 0.0;
  double theta = 0.0;

  friend bool operator==(const Polar&, const Polar&) = default;
};

inline std::string to_string(const Polar& p) {
  return std::to_string(p.r) + " " + std::to_string(p.theta);
}

inline double wrap_angle(double theta) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

namespace hyperbolic_detail {

// cosh(d) - 1 for two points in polar form. Written as a sum of squares so
// that nearby points far from the origin do not cancel catastrophically.
inline double cosh_distance_minus_one(const Polar& p, const Polar& q) noexcept {
  const double half_dr = std::sinh(0.5 * (p.r - q.r));
  const double half_dt = std::sin(0.5 * (p.theta - q.theta));
  return 2.0 * half_dr * half_dr +
         2.0 * std::sinh(p.r) * std::sinh(q.r) * half_dt * half_dt;
}

}  // namespace hyperbolic_detail

// The hyperbolic plane (curvature -1) with area element sinh(r) dr dtheta,
// windowed to a disk about the origin of the polar chart.
class HyperbolicDisk {
 public:
  using point_type = Polar;
  static constexpr SpaceKind kind = SpaceKind::HyperbolicDisk;
  static constexpr bool is_graph = false;

  explicit HyperbolicDisk(WindowSpec<Polar> window) : window_(window) {
    validate_window(window_);
    require(window_.center.r == 0.0,
            "hyperbolic windows are centered at the chart origin");
  }

  const WindowSpec<Polar>& window() const noexcept { return window_; }

  HyperbolicDisk with_window(const WindowSpec<Polar>& window) const {
    return HyperbolicDisk(window);
  }

  double distance(const Polar& p, const Polar& q) const noexcept {
    const double x = hyperbolic_detail::cosh_distance_minus_one(p, q);
    return std::log1p(x + std::sqrt(x * (x + 2.0)));
  }

  bool within(const Polar& p, const Polar& q, double reach) const noexcept {
    const double s = std::sinh(0.5 * reach);
    return hyperbolic_detail::cosh_distance_minus_one(p, q) <= 2.0 * s * s;
  }

  // 2 pi (cosh r - 1), evaluated as 4 pi sinh^2(r/2).
  double measure_ball(const Polar& /*center*/, double r) const {
    require(r >= 0.0, "ball radius must be non-negative");
    const double s = std::sinh(0.5 * r);
    return 4.0 * std::numbers::pi * s * s;
  }

  double radial(const Polar& p) const noexcept { return p.r; }
  bool in_region(const Polar& p) const noexcept { return p.r <= window_.outer(); }
  bool in_window(const Polar& p) const noexcept { return p.r <= window_.radius; }
  bool is_valid(const Polar& p) const noexcept {
    return std::isfinite(p.r) && p.r >= 0.0 && p.theta >= 0.0 &&
           p.theta < 2.0 * std::numbers::pi;
  }

  double region_measure() const { return measure_ball(window_.center, window_.outer()); }
  double window_measure() const { return measure_ball(window_.center, window_.radius); }

  // Uniform point of B(center, r). The radial part inverts the CDF
  // sinh^2(s/2) / sinh^2(r/2); the result is moved to `center` by a boost of
  // the hyperboloid model.
  Polar ball_point(const Polar& center, double r, double u_radial,
                   double u_angle) const noexcept {
    const double s = 2.0 * std::asinh(std::sqrt(u_radial) * std::sinh(0.5 * r));
    const double phi = 2.0 * std::numbers::pi * u_angle;
    if (center.r == 0.0) {
      return {s, wrap_angle(phi)};
    }
    const double t = std::cosh(s);
    const double x = std::sinh(s) * std::cos(phi);
    const double y = std::sinh(s) * std::sin(phi);
    const double ch = std::cosh(center.r);
    const double sh = std::sinh(center.r);
    const double bx = sh * t + ch * x;
    return {std::asinh(std::hypot(bx, y)),
            wrap_angle(std::atan2(y, bx) + center.theta)};
  }

  Polar sample_in_ball(const Polar& center, double r, Stream& stream) const {
    const double u = stream.uniform();
    return ball_point(center, r, u, stream.uniform());
  }

  Polar sample_in_region(Stream& stream) const {
    return sample_in_ball(window_.center, window_.outer(), stream);
  }

 private:
  WindowSpec<Polar> window_;
};

}  // namespace percolab

#endif  // PERCOLAB_HYPERBOLIC_HPP_
