#ifndef PERCOLAB_WINDOW_HPP_
#define PERCOLAB_WINDOW_HPP_

#include <string>

#include "percolab/error.hpp"

namespace percolab {

enum class SpaceKind { EuclideanPlane, HyperbolicDisk, CayleyGraph, NetGraph };

inline std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::EuclideanPlane: return "euclidean";
    case SpaceKind::HyperbolicDisk: return "hyperbolic";
    case SpaceKind::CayleyGraph: return "cayley";
    case SpaceKind::NetGraph: return "net";
  }
  return "unknown";
}

// A metric ball window. Everything is simulated on the padded ball of radius
// `radius + padding` (the region); percolation questions are asked inside
// the ball of radius `radius`.
template <class Point>
struct WindowSpec {
  Point center{};
  double radius = 1.0;
  double padding = 0.0;

  double outer() const noexcept { return radius + padding; }
};

template <class Point>
void validate_window(const WindowSpec<Point>& window) {
  require(window.radius > 0.0, "window radius must be positive");
  require(window.padding >= 0.0, "window padding must be non-negative");
}

}  // namespace percolab

#endif  // PERCOLAB_WINDOW_HPP_
