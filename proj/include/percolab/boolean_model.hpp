#ifndef PERCOLAB_BOOLEAN_MODEL_HPP_
#define PERCOLAB_BOOLEAN_MODEL_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "percolab/point_process.hpp"
#include "percolab/space.hpp"
#include "percolab/spatial_index.hpp"
#include "percolab/union_find.hpp"

namespace percolab {

// Union of closed balls B(x, R) over the points of a configuration. R = 0 is
// accepted (only coincident centers touch); transported subcritical radii
// reach it when gamma = 0.
template <MetricMeasureSpace S>
struct BooleanModel {
  S space;
  PointConfiguration<point_t<S>> config;
  double radius = 0.0;
};

template <MetricMeasureSpace S>
void validate_model(const BooleanModel<S>& model) {
  require(model.radius >= 0.0, "Boolean radius must be non-negative");
}

struct Adjacency {
  std::vector<std::vector<std::size_t>> neighbors;

  std::size_t size() const noexcept { return neighbors.size(); }
  std::size_t edge_count() const noexcept {
    std::size_t m = 0;
    for (const auto& nb : neighbors) m += nb.size();
    return m / 2;
  }
};

//! Edge (u, v) iff d(x_u, x_v) <= 2R. Neighbor lists are sorted.
template <MetricMeasureSpace S>
Adjacency intersection_graph(const BooleanModel<S>& model) {
  validate_model(model);
  const auto& pts = model.config.points;
  const double reach = 2.0 * model.radius;
  Adjacency adj;
  adj.neighbors.resize(pts.size());
  auto link = [&](std::size_t u, std::size_t v) {
    adj.neighbors[u].push_back(v);
    adj.neighbors[v].push_back(u);
  };
  if constexpr (std::is_same_v<S, EuclideanPlane>) {
    if (reach > 0.0) {
      SquareGrid grid(reach);
      std::unordered_map<CellKey, std::vector<std::size_t>> buckets;
      for (std::size_t i = 0; i < pts.size(); ++i) buckets[grid.key_of(pts[i])].push_back(i);
      for (std::size_t u = 0; u < pts.size(); ++u) {
        grid.for_each_near(pts[u], reach, [&](CellKey key, auto, auto) {
          const auto it = buckets.find(key);
          if (it == buckets.end()) return;
          for (const auto v : it->second) {
            if (v > u && model.space.within(pts[u], pts[v], reach)) link(u, v);
          }
        });
      }
      for (auto& nb : adj.neighbors) std::sort(nb.begin(), nb.end());
      return adj;
    }
  }
  for (std::size_t u = 0; u < pts.size(); ++u) {
    for (std::size_t v = u + 1; v < pts.size(); ++v) {
      if (model.space.within(pts[u], pts[v], reach)) link(u, v);
    }
  }
  for (auto& nb : adj.neighbors) std::sort(nb.begin(), nb.end());
  return adj;
}

struct ClusterReport {
  std::vector<std::size_t> labels;  // component id per point, numbered by first point
  std::vector<std::size_t> sizes;   // indexed by component id
  double max_extent = 0.0;
  bool crossing = false;

  std::size_t component_count() const noexcept { return sizes.size(); }
};

//! Components of the intersection graph via union-find.
inline ClusterReport clusters(const Adjacency& adj) {
  UnionFind uf(adj.size());
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (const auto v : adj.neighbors[u]) uf.unite(u, v);
  }
  ClusterReport report;
  report.labels.resize(adj.size());
  std::vector<std::size_t> label_of_root(adj.size(), adj.size());
  for (std::size_t u = 0; u < adj.size(); ++u) {
    auto& label = label_of_root[uf.find(u)];
    if (label == adj.size()) {
      label = report.sizes.size();
      report.sizes.push_back(0);
    }
    report.labels[u] = label;
    report.sizes[label] += 1;
  }
  return report;
}

// Core and shell of the crossing event, as radii about the window center.
struct CrossingGeometry {
  double core_fraction = 0.25;
  std::optional<double> shell_offset;  // defaults to the Boolean radius

  double core_radius(double L) const { return core_fraction * L; }
  double shell_radius(double L, double R) const { return L - shell_offset.value_or(R); }
};

//! Some component holds a center within the core and a center in the shell.
template <MetricMeasureSpace S>
bool crossing_proxy(const BooleanModel<S>& model, const ClusterReport& report,
                    const CrossingGeometry& geometry = {}) {
  const auto& w = model.space.window();
  if (w.padding < model.radius) {
    fail(ErrorCode::InvalidArgument, "window padding is smaller than the Boolean radius");
  }
  const double core = geometry.core_radius(w.radius);
  const double shell = geometry.shell_radius(w.radius, model.radius);
  std::vector<char> has_core(report.sizes.size(), 0), has_shell(report.sizes.size(), 0);
  const auto& pts = model.config.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = model.space.radial(pts[i]);
    const auto c = report.labels[i];
    if (r <= core) has_core[c] = 1;
    if (r >= shell) has_shell[c] = 1;
    if (has_core[c] && has_shell[c]) return true;
  }
  return false;
}

//! Largest intra-component center distance, plus 2R; 0 for an empty model.
template <MetricMeasureSpace S>
double max_extent(const BooleanModel<S>& model, const ClusterReport& report) {
  const auto& pts = model.config.points;
  if (pts.empty()) return 0.0;
  std::vector<std::vector<std::size_t>> members(report.sizes.size());
  for (std::size_t i = 0; i < pts.size(); ++i) members[report.labels[i]].push_back(i);
  double best = 0.0;
  for (const auto& m : members) {
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        best = std::max(best, model.space.distance(pts[m[a]], pts[m[b]]));
      }
    }
  }
  return best + 2.0 * model.radius;
}

//! Intersection graph, components, extent and crossing in one pass.
template <MetricMeasureSpace S>
ClusterReport analyze(const BooleanModel<S>& model, const CrossingGeometry& geometry = {}) {
  auto report = clusters(intersection_graph(model));
  report.max_extent = max_extent(model, report);
  report.crossing = crossing_proxy(model, report, geometry);
  return report;
}

}  // namespace percolab

#endif  // PERCOLAB_BOOLEAN_MODEL_HPP_
