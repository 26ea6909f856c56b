#ifndef PERCOLAB_NET_HPP_
#define PERCOLAB_NET_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "percolab/net_graph.hpp"
#include "percolab/packing.hpp"
#include "percolab/space.hpp"

namespace percolab {

// An epsilon-separated subset of the ambient region that rho-covers it.
template <MetricMeasureSpace Ambient>
struct NetSpec {
  Ambient ambient;
  std::vector<point_t<Ambient>> points;
  double epsilon = 0.0;
  double rho = 0.0;
};

namespace net_detail {

template <GraphSpace S>
double covering_radius(const S& space, const std::vector<point_t<S>>& net) {
  double rho = 0.0;
  for (const auto& v : space.region_vertices()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : net) best = std::min(best, space.distance(c, v));
    rho = std::max(rho, best);
  }
  return rho;
}

// Max over a probe grid of the nearest-center distance, plus the probe
// grid's own covering radius: an upper bound on the true covering radius.
template <ContinuumSpace S>
double covering_radius(const S& space, const std::vector<point_t<S>>& net, double epsilon) {
  const double probe = epsilon / 8.0;
  PointIndex<point_t<S>> index(epsilon);
  for (std::size_t i = 0; i < net.size(); ++i) index.insert(net[i], i);
  double rho = 0.0;
  for (const auto& g : covering_grid(space, probe)) {
    double best = std::numeric_limits<double>::infinity();
    index.for_each_candidate(g, 2.0 * epsilon, [&](std::size_t id) {
      best = std::min(best, space.distance(net[id], g));
    });
    if (best > 2.0 * epsilon) {
      for (const auto& c : net) best = std::min(best, space.distance(c, g));
    }
    rho = std::max(rho, best);
  }
  return rho + probe;
}

}  // namespace net_detail

//! Greedy maximal epsilon-packing of the region, which is a 2*epsilon cover.
template <MetricMeasureSpace S>
NetSpec<S> epsilon_net(const S& space, double epsilon, std::uint64_t seed,
                       const PackingOptions& opts = {}) {
  require(epsilon > 0.0, "net separation epsilon must be positive");
  Stream stream = make_stream(seed, 0, 0, Purpose::Net);
  NetSpec<S> net{space, greedy_packing(space, epsilon, stream, opts), epsilon, 0.0};
  if constexpr (GraphSpace<S>) {
    net.rho = net_detail::covering_radius(space, net.points);
  } else {
    net.rho = net_detail::covering_radius(space, net.points, epsilon);
  }
  return net;
}

//! Graph on the net points with an edge iff ambient distance <= 2 rho.
template <MetricMeasureSpace S>
NetGraph net_graph(const NetSpec<S>& net) {
  const auto& pts = net.points;
  require(!pts.empty(), "net is empty");
  std::vector<std::vector<std::size_t>> adjacency(pts.size());
  const double reach = 2.0 * net.rho;
  for (std::size_t u = 0; u < pts.size(); ++u) {
    for (std::size_t v = u + 1; v < pts.size(); ++v) {
      if (reach > 0.0 && net.ambient.distance(pts[u], pts[v]) <= reach) {
        adjacency[u].push_back(v);
        adjacency[v].push_back(u);
      }
    }
  }
  std::size_t center = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = net.ambient.radial(pts[i]);
    if (d < best) {
      best = d;
      center = i;
    }
  }
  // Window: the whole connected component of the center.
  NetGraph probe(adjacency, WindowSpec<NetVertex>{{center}, 1.0, 0.0});
  int ecc = 1;
  for (std::size_t v = 0; v < pts.size(); ++v) {
    const int h = probe.hops(center, v);
    if (h != NetGraph::kUnreachable) ecc = std::max(ecc, h);
  }
  return probe.with_window(WindowSpec<NetVertex>{{center}, static_cast<double>(ecc), 0.0});
}

}  // namespace percolab

#endif  // PERCOLAB_NET_HPP_
