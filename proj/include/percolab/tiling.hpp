#ifndef PERCOLAB_TILING_HPP_
#define PERCOLAB_TILING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

#include "percolab/space.hpp"
#include "percolab/spatial_index.hpp"

namespace percolab {

// Fixed tilings of the simulation region used by the Monte Carlo engine.
// Each tile carries its reference measure and a uniform sampler over the
// whole tile; points landing outside the region are discarded by the caller.
template <class S>
class Tiling;

template <>
class Tiling<EuclideanPlane> {
 public:
  using P = Vec2;
  static constexpr bool exact_neighbors = false;
  static constexpr bool single_point = false;

  explicit Tiling(const EuclideanPlane& space, double side = 1.0)
      : space_(space), grid_(side) {
    require(side > 0.0, "tile side must be positive");
  }

  const EuclideanPlane& space() const noexcept { return space_; }
  double measure(CellKey) const noexcept { return grid_.side() * grid_.side(); }

  P sample(CellKey key, Stream& stream) const {
    const auto i = static_cast<std::int32_t>(static_cast<std::uint32_t>(key >> 32));
    const auto j = static_cast<std::int32_t>(static_cast<std::uint32_t>(key));
    const double s = grid_.side();
    const double x = (static_cast<double>(i) + stream.uniform()) * s;
    return {x, (static_cast<double>(j) + stream.uniform()) * s};
  }

  template <class Fn>
  void cells_near(const P& p, double reach, Fn&& fn) const {
    const double outer = space_.window().outer();
    grid_.for_each_near(p, reach, [&](CellKey key, std::int64_t i, std::int64_t j) {
      if (gap(i, j) <= outer) fn(key);
    });
  }

  //! Tiles meeting the ball of the given radius about the window center.
  template <class Fn>
  void cells_within(double radius, Fn&& fn) const {
    const double r = std::min(radius, space_.window().outer());
    grid_.for_each_near(space_.window().center, r,
                        [&](CellKey key, std::int64_t i, std::int64_t j) {
                          if (gap(i, j) <= r) fn(key);
                        });
  }

 private:
  // Distance from the window center to tile (i, j).
  double gap(std::int64_t i, std::int64_t j) const noexcept {
    const double s = grid_.side();
    const auto& c = space_.window().center;
    const double x0 = static_cast<double>(i) * s, y0 = static_cast<double>(j) * s;
    const double dx = std::max({x0 - c.x, 0.0, c.x - (x0 + s)});
    const double dy = std::max({y0 - c.y, 0.0, c.y - (y0 + s)});
    return std::hypot(dx, dy);
  }

  EuclideanPlane space_;
  SquareGrid grid_;
};

template <>
class Tiling<HyperbolicDisk> {
 public:
  using P = Polar;
  static constexpr bool exact_neighbors = false;
  static constexpr bool single_point = false;

  explicit Tiling(const HyperbolicDisk& space, double width = 1.0)
      : space_(space), grid_(width) {
    require(width > 0.0, "band width must be positive");
  }

  const HyperbolicDisk& space() const noexcept { return space_; }

  // (2 pi / m_k) (cosh r_{k+1} - cosh r_k)
  double measure(CellKey key) const noexcept {
    const auto [k, s] = unpack(key);
    const double a = grid_.band_lower(k), b = grid_.band_lower(k + 1);
    return 2.0 * std::numbers::pi / static_cast<double>(grid_.sectors(k)) *
           (std::cosh(b) - std::cosh(a));
  }

  P sample(CellKey key, Stream& stream) const {
    const auto [k, s] = unpack(key);
    const double ca = std::cosh(grid_.band_lower(k));
    const double cb = std::cosh(grid_.band_lower(k + 1));
    const double r = std::acosh(ca + stream.uniform() * (cb - ca));
    const double m = static_cast<double>(grid_.sectors(k));
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(s) + stream.uniform()) / m;
    return {r, wrap_angle(theta)};
  }

  template <class Fn>
  void cells_near(const P& p, double reach, Fn&& fn) const {
    const double outer = space_.window().outer();
    grid_.for_each_near(p, reach, [&](CellKey key, std::int64_t k, std::int64_t) {
      if (grid_.band_lower(k) <= outer) fn(key);
    });
  }

  template <class Fn>
  void cells_within(double radius, Fn&& fn) const {
    const double r = std::min(radius, space_.window().outer());
    for (std::int64_t k = 0; grid_.band_lower(k) <= r; ++k) {
      const auto m = grid_.sectors(k);
      for (std::int64_t s = 0; s < m; ++s) fn(pack_key(k, s));
    }
  }

 private:
  static std::pair<std::int64_t, std::int64_t> unpack(CellKey key) noexcept {
    return {static_cast<std::int64_t>(key >> 32),
            static_cast<std::int64_t>(static_cast<std::uint32_t>(key))};
  }

  HyperbolicDisk space_;
  PolarGrid grid_;
};

// Graph kinds: one tile per region vertex, keyed by its region index. Only
// the first Poisson arrival of a vertex matters (coincident balls coincide).
template <GraphSpace S>
class Tiling<S> {
 public:
  using P = point_t<S>;
  static constexpr bool exact_neighbors = true;
  static constexpr bool single_point = true;

  explicit Tiling(const S& space, double = 1.0) : space_(space) {}

  const S& space() const noexcept { return space_; }
  double measure(CellKey) const noexcept { return 1.0; }

  P sample(CellKey key, Stream&) const {
    return space_.region_vertices()[static_cast<std::size_t>(key)];
  }

  template <class Fn>
  void cells_near(const P& p, double reach, Fn&& fn) const {
    if constexpr (requires { space_.offsets(reach); }) {
      if (floor_radius(reach) <= table_radius()) {
        for (const auto& b : space_.offsets(reach)) {
          if (const auto i = space_.index_of(space_.group().multiply(p, b))) fn(CellKey{*i});
        }
        return;
      }
    }
    for (const auto& v : space_.ball_vertices(p, reach)) {
      if (const auto i = space_.index_of(v)) fn(CellKey{*i});
    }
  }

  template <class Fn>
  void cells_within(double radius, Fn&& fn) const {
    const auto& verts = space_.region_vertices();
    for (std::size_t i = 0; i < verts.size() && space_.region_radial(i) <= radius; ++i) {
      fn(CellKey{i});
    }
  }

 private:
  int table_radius() const {
    if constexpr (requires { space_.table_radius(); }) {
      return space_.table_radius();
    } else {
      return -1;
    }
  }

  S space_;
};

}  // namespace percolab

#endif  // PERCOLAB_TILING_HPP_
