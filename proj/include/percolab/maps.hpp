#ifndef PERCOLAB_MAPS_HPP_
#define PERCOLAB_MAPS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "percolab/net.hpp"
#include "percolab/quasi_isometry.hpp"

namespace percolab {

template <MetricMeasureSpace S>
QuasiIsometryMap<S, S> identity_map(const S& space) {
  QuasiIsometryMap<S, S> F{"identity", space, space,
                           [](const point_t<S>& x) { return x; }, {1.0, 0.0, 0.0},
                           [](const point_t<S>& z) { return z; }, {}};
  return F;
}

//! Z^2 standard generators -> Z^2 king moves, identity on vertices.
//! d_king <= d_std <= 2 d_king gives (alpha, beta, gamma) = (2, 0, 0).
inline QuasiIsometryMap<CayleyGraph, CayleyGraph> std_to_king(const WindowSpec<GroupElement>& domain,
                                                             const WindowSpec<GroupElement>& codomain) {
  return {"z2-std-to-king",
          CayleyGraph(GroupSpec::free_abelian(2), domain),
          CayleyGraph(GroupSpec::z2_king(), codomain),
          [](const GroupElement& g) { return g; },
          {2.0, 0.0, 0.0},
          [](const GroupElement& g) { return g; },
          {}};
}

inline QuasiIsometryMap<CayleyGraph, CayleyGraph> king_to_std(const WindowSpec<GroupElement>& domain,
                                                             const WindowSpec<GroupElement>& codomain) {
  return {"z2-king-to-std",
          CayleyGraph(GroupSpec::z2_king(), domain),
          CayleyGraph(GroupSpec::free_abelian(2), codomain),
          [](const GroupElement& g) { return g; },
          {2.0, 0.0, 0.0},
          [](const GroupElement& g) { return g; },
          {}};
}

inline GroupElement round_to_lattice(const Vec2& x) {
  return {static_cast<std::int64_t>(std::llround(x.x)), static_cast<std::int64_t>(std::llround(x.y))};
}

// Nearest lattice point, R^2 (Euclidean) -> Z^2 (standard word metric).
// Each coordinate moves by at most 1/2, so |d_1(F x, F y) - d_1(x, y)| <= 1,
// and d_2 <= d_1 <= sqrt(2) d_2 then fits (alpha, beta) = (2, 2); every
// lattice point is its own image, so gamma = 1 is generous.
inline QuasiIsometryMap<EuclideanPlane, CayleyGraph> rounding_map(
    const WindowSpec<Vec2>& domain, const WindowSpec<GroupElement>& codomain) {
  return {"rounding",
          EuclideanPlane(domain),
          CayleyGraph(GroupSpec::free_abelian(2), codomain),
          round_to_lattice,
          {2.0, 2.0, 1.0},
          [](const GroupElement& g) {
            return Vec2{static_cast<double>(g[0]), static_cast<double>(g[1])};
          },
          {}};
}

// Parameters of the nearest-net-point map from a Euclidean region to its net
// graph. A hop joins points at most 2 rho apart, so h >= d / (2 rho) - 1. A
// shortest path can be routed through net points within rho of the segment,
// which by epsilon-separation number at most 4 (d + 2 rho + eps)(2 rho + eps)
// / (pi eps^2).
inline QiParams euclidean_net_params(double epsilon, double rho) {
  require(epsilon > 0.0 && rho > 0.0, "net parameters must be positive");
  const double a = 4.0 * (2.0 * rho + epsilon) / (std::numbers::pi * epsilon * epsilon);
  return {std::max({1.0, 2.0 * rho, a}), std::max(1.0, a * (2.0 * rho + epsilon)), 0.0};
}

//! Ambient region -> net graph, nearest net point (first index on ties).
template <ContinuumSpace Ambient>
QuasiIsometryMap<Ambient, NetGraph> net_map(const NetSpec<Ambient>& net, QiParams params) {
  auto index = std::make_shared<PointIndex<point_t<Ambient>>>(std::max(net.rho, net.epsilon));
  for (std::size_t i = 0; i < net.points.size(); ++i) index->insert(net.points[i], i);
  const auto points = net.points;
  const Ambient ambient = net.ambient;
  const double reach = std::max(net.rho, net.epsilon);
  auto nearest = [index, points, ambient, reach](const point_t<Ambient>& x) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    double best_d = std::numeric_limits<double>::infinity();
    auto consider = [&](std::size_t id) {
      const double d = ambient.distance(points[id], x);
      if (d < best_d || (d == best_d && id < best)) {
        best_d = d;
        best = id;
      }
    };
    index->for_each_candidate(x, reach, consider);
    if (best_d > reach) {
      for (std::size_t id = 0; id < points.size(); ++id) consider(id);
    }
    return NetVertex{best};
  };
  return {"net-discretization",
          net.ambient,
          net_graph(net),
          nearest,
          params,
          [points](const NetVertex& v) { return points.at(v.index); },
          {}};
}

}  // namespace percolab

#endif  // PERCOLAB_MAPS_HPP_
