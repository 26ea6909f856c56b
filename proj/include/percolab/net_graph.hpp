#ifndef PERCOLAB_NET_GRAPH_HPP_
#define PERCOLAB_NET_GRAPH_HPP_

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "percolab/cayley_graph.hpp"
#include "percolab/rng.hpp"
#include "percolab/window.hpp"

namespace percolab {

struct NetVertex {
  std::size_t index = 0;

  friend bool operator==(const NetVertex&, const NetVertex&) = default;
};

inline std::string to_string(const NetVertex& v) { return std::to_string(v.index); }

// Discretization graph on the points of a separated net, with hop distance
// and counting measure.
class NetGraph {
 public:
  using point_type = NetVertex;
  static constexpr SpaceKind kind = SpaceKind::NetGraph;
  static constexpr bool is_graph = true;
  static constexpr int kUnreachable = std::numeric_limits<int>::max();

  NetGraph(std::vector<std::vector<std::size_t>> adjacency, WindowSpec<NetVertex> window)
      : topo_(std::make_shared<const Topology>(build_topology(std::move(adjacency)))),
        view_(std::make_shared<const View>(build_view(*topo_, window))) {}

  const WindowSpec<NetVertex>& window() const noexcept { return view_->window; }

  NetGraph with_window(const WindowSpec<NetVertex>& window) const {
    return NetGraph(topo_, window);
  }

  std::size_t size() const noexcept { return topo_->adjacency.size(); }
  const std::vector<std::vector<std::size_t>>& adjacency() const noexcept {
    return topo_->adjacency;
  }
  std::size_t max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& nb : topo_->adjacency) d = std::max(d, nb.size());
    return d;
  }

  int hops(std::size_t u, std::size_t v) const noexcept {
    return topo_->hops[u * size() + v];
  }

  double distance(const NetVertex& u, const NetVertex& v) const {
    check(u);
    check(v);
    const int h = hops(u.index, v.index);
    return h == kUnreachable ? std::numeric_limits<double>::infinity()
                             : static_cast<double>(h);
  }

  bool within(const NetVertex& u, const NetVertex& v, double reach) const {
    return hops(u.index, v.index) <= floor_radius(reach);
  }

  double measure_ball(const NetVertex& center, double r) const {
    require(r >= 0.0, "ball radius must be non-negative");
    check(center);
    const int n = floor_radius(r);
    std::size_t count = 0;
    for (std::size_t v = 0; v < size(); ++v) count += hops(center.index, v) <= n;
    return static_cast<double>(count);
  }

  std::vector<NetVertex> ball_vertices(const NetVertex& center, double r) const {
    check(center);
    const int n = floor_radius(r);
    std::vector<NetVertex> out;
    for (std::size_t v = 0; v < size(); ++v) {
      if (hops(center.index, v) <= n) out.push_back({v});
    }
    return out;
  }

  double radial(const NetVertex& v) const { return distance(view_->window.center, v); }
  bool in_region(const NetVertex& v) const { return index_of(v).has_value(); }
  bool in_window(const NetVertex& v) const {
    return v.index < size() && hops(view_->window.center.index, v.index) <=
                                   floor_radius(view_->window.radius);
  }
  bool is_valid(const NetVertex& v) const noexcept { return v.index < size(); }

  const std::vector<NetVertex>& region_vertices() const noexcept { return view_->region; }
  std::optional<std::size_t> index_of(const NetVertex& v) const {
    if (v.index >= size()) return std::nullopt;
    const auto i = view_->region_index[v.index];
    if (i == kAbsent) return std::nullopt;
    return i;
  }
  double region_radial(std::size_t i) const {
    return static_cast<double>(hops(view_->window.center.index, view_->region[i].index));
  }

  double region_measure() const { return static_cast<double>(view_->region.size()); }
  double window_measure() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < view_->region.size(); ++i) {
      n += region_radial(i) <= view_->window.radius;
    }
    return static_cast<double>(n);
  }

  NetVertex sample_in_ball(const NetVertex& center, double r, Stream& stream) const {
    const auto pool = ball_vertices(center, r);
    return pool[stream.below(pool.size())];
  }
  NetVertex sample_in_region(Stream& stream) const {
    return view_->region[stream.below(view_->region.size())];
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  struct Topology {
    std::vector<std::vector<std::size_t>> adjacency;
    std::vector<int> hops;
  };
  struct View {
    WindowSpec<NetVertex> window;
    std::vector<NetVertex> region;
    std::vector<std::size_t> region_index;
  };

  NetGraph(std::shared_ptr<const Topology> topo, const WindowSpec<NetVertex>& window)
      : topo_(std::move(topo)), view_(std::make_shared<const View>(build_view(*topo_, window))) {}

  void check(const NetVertex& v) const {
    if (v.index >= size()) fail(ErrorCode::ForeignPoint, "foreign point: no such net vertex");
  }

  static Topology build_topology(std::vector<std::vector<std::size_t>> adjacency) {
    const std::size_t n = adjacency.size();
    require(n > 0, "net graph needs at least one vertex");
    for (std::size_t u = 0; u < n; ++u) {
      for (const auto v : adjacency[u]) {
        require(v < n && v != u, "net graph adjacency out of range or self-loop");
      }
    }
    Topology t{std::move(adjacency), std::vector<int>(n * n, kUnreachable)};
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
      int* row = t.hops.data() + s * n;
      row[s] = 0;
      queue.assign(1, s);
      while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (const auto v : t.adjacency[u]) {
          if (row[v] == kUnreachable) {
            row[v] = row[u] + 1;
            queue.push_back(v);
          }
        }
      }
    }
    return t;
  }

  static View build_view(const Topology& topo, const WindowSpec<NetVertex>& window) {
    validate_window(window);
    const std::size_t n = topo.adjacency.size();
    require(window.center.index < n, "window center is not a net vertex");
    View view{window, {}, std::vector<std::size_t>(n, kAbsent)};
    const int outer = floor_radius(window.outer());
    const int* row = topo.hops.data() + window.center.index * n;
    // Region listed by hop distance from the center, then by index.
    std::vector<std::pair<int, std::size_t>> order;
    for (std::size_t v = 0; v < n; ++v) {
      if (row[v] <= outer) order.emplace_back(row[v], v);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [h, v] : order) {
      view.region_index[v] = view.region.size();
      view.region.push_back({v});
    }
    return view;
  }

  std::shared_ptr<const Topology> topo_;
  std::shared_ptr<const View> view_;
};

}  // namespace percolab

#endif  // PERCOLAB_NET_GRAPH_HPP_
