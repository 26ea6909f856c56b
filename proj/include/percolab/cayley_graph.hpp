#ifndef PERCOLAB_CAYLEY_GRAPH_HPP_
#define PERCOLAB_CAYLEY_GRAPH_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "percolab/group.hpp"
#include "percolab/rng.hpp"
#include "percolab/window.hpp"

namespace percolab {

inline int floor_radius(double r) {
  return static_cast<int>(std::floor(r + 1e-9));
}

// Cayley graph C(G, S) with the word metric and counting measure. The window
// is the word-metric ball about `window.center`; the region ball and a
// distance table are precomputed once and shared by copies.
class CayleyGraph {
 public:
  using point_type = GroupElement;
  static constexpr SpaceKind kind = SpaceKind::CayleyGraph;
  static constexpr bool is_graph = true;

  static constexpr std::size_t kTableLimit = 4'000'000;

  CayleyGraph(GroupSpec group, WindowSpec<GroupElement> window)
      : data_(std::make_shared<const Data>(build(std::move(group), std::move(window)))) {}

  const GroupSpec& group() const noexcept { return data_->group; }
  const WindowSpec<GroupElement>& window() const noexcept { return data_->window; }

  CayleyGraph with_window(const WindowSpec<GroupElement>& window) const {
    return CayleyGraph(data_->group, window);
  }

  int word_length(const GroupElement& g) const {
    const auto it = data_->length.find(g);
    if (it != data_->length.end()) return it->second;
    return word_distance(data_->group, data_->group.identity(), g,
                         std::numeric_limits<int>::max() / 2);
  }

  int graph_distance(const GroupElement& g, const GroupElement& h) const {
    return word_length(data_->group.multiply(data_->group.inverse(g), h));
  }

  double distance(const GroupElement& g, const GroupElement& h) const {
    return static_cast<double>(graph_distance(g, h));
  }

  bool within(const GroupElement& g, const GroupElement& h, double reach) const {
    return graph_distance(g, h) <= floor_radius(reach);
  }

  double measure_ball(const GroupElement& /*center*/, double r) const {
    require(r >= 0.0, "ball radius must be non-negative");
    const int n = floor_radius(r);
    if (n <= data_->table.radius()) {
      return static_cast<double>(data_->table.sizes[static_cast<std::size_t>(n)]);
    }
    return static_cast<double>(cayley_ball(data_->group, n).elements.size());
  }

  //! Identity-ball elements of word length <= r, in breadth-first order.
  //! Left multiplication by g maps them onto B(g, r).
  std::span<const GroupElement> offsets(double r) const {
    const int n = floor_radius(r);
    require(n <= data_->table.radius(), "offset radius beyond distance table");
    return {data_->table.elements.data(), data_->table.sizes[static_cast<std::size_t>(n)]};
  }

  int table_radius() const noexcept { return data_->table.radius(); }

  std::vector<GroupElement> ball_vertices(const GroupElement& center, double r) const {
    std::vector<GroupElement> out;
    const int n = floor_radius(r);
    if (n <= data_->table.radius()) {
      for (const auto& b : offsets(r)) out.push_back(data_->group.multiply(center, b));
    } else {
      for (const auto& b : cayley_ball(data_->group, n).elements) {
        out.push_back(data_->group.multiply(center, b));
      }
    }
    return out;
  }

  double radial(const GroupElement& g) const {
    if (const auto i = index_of(g)) return data_->region_radial[*i];
    return distance(data_->window.center, g);
  }
  bool in_region(const GroupElement& g) const { return index_of(g).has_value(); }
  bool in_window(const GroupElement& g) const {
    const auto i = index_of(g);
    return i && data_->region_radial[*i] <= data_->window.radius;
  }
  bool is_valid(const GroupElement& g) const { return data_->group.is_element(g); }

  const std::vector<GroupElement>& region_vertices() const noexcept {
    return data_->region;
  }
  std::optional<std::size_t> index_of(const GroupElement& g) const {
    const auto it = data_->region_index.find(g);
    if (it == data_->region_index.end()) return std::nullopt;
    return it->second;
  }
  //! Word distance from the window center of region vertex i.
  double region_radial(std::size_t i) const { return data_->region_radial[i]; }

  double region_measure() const { return static_cast<double>(data_->region.size()); }
  double window_measure() const {
    std::size_t n = 0;
    for (const double r : data_->region_radial) n += r <= data_->window.radius;
    return static_cast<double>(n);
  }

  GroupElement sample_in_ball(const GroupElement& center, double r, Stream& stream) const {
    const int n = floor_radius(r);
    if (n <= data_->table.radius()) {
      const auto pool = offsets(r);
      return data_->group.multiply(center, pool[stream.below(pool.size())]);
    }
    const auto pool = ball_vertices(center, r);
    return pool[stream.below(pool.size())];
  }

  GroupElement sample_in_region(Stream& stream) const {
    return data_->region[stream.below(data_->region.size())];
  }

 private:
  struct Data {
    GroupSpec group;
    WindowSpec<GroupElement> window;
    CayleyBall table;
    std::unordered_map<GroupElement, int, ElementHash> length;
    std::vector<GroupElement> region;
    std::vector<double> region_radial;
    std::unordered_map<GroupElement, std::size_t, ElementHash> region_index;
  };

  static Data build(GroupSpec group, WindowSpec<GroupElement> window) {
    validate_window(window);
    require(group.is_element(window.center), "window center is not a group element");
    const int outer = floor_radius(window.outer());
    CayleyBall table;
    try {
      table = cayley_ball(group, 2 * outer, kTableLimit);
    } catch (const Error&) {
      table = cayley_ball(group, outer);
    }
    Data d{std::move(group), std::move(window), std::move(table), {}, {}, {}, {}};
    d.length.reserve(d.table.elements.size());
    for (std::size_t i = 0; i < d.table.elements.size(); ++i) {
      d.length.emplace(d.table.elements[i], d.table.lengths[i]);
    }
    const std::size_t region_size = d.table.sizes[static_cast<std::size_t>(outer)];
    d.region.reserve(region_size);
    d.region_radial.reserve(region_size);
    for (std::size_t i = 0; i < region_size; ++i) {
      d.region.push_back(d.group.multiply(d.window.center, d.table.elements[i]));
      d.region_radial.push_back(d.table.lengths[i]);
      d.region_index.emplace(d.region.back(), i);
    }
    return d;
  }

  std::shared_ptr<const Data> data_;
};

}  // namespace percolab

#endif  // PERCOLAB_CAYLEY_GRAPH_HPP_
