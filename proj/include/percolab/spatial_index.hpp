#ifndef PERCOLAB_SPATIAL_INDEX_HPP_
#define PERCOLAB_SPATIAL_INDEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "percolab/euclidean.hpp"
#include "percolab/hyperbolic.hpp"

namespace percolab {

using CellKey = std::uint64_t;

inline CellKey pack_key(std::int64_t a, std::int64_t b) noexcept {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Square lattice of side `side` over the plane.
class SquareGrid {
 public:
  explicit SquareGrid(double side) : side_(side) {}

  double side() const noexcept { return side_; }

  std::int64_t coord(double v) const noexcept {
    return static_cast<std::int64_t>(std::floor(v / side_));
  }
  CellKey key_of(const Vec2& p) const noexcept { return pack_key(coord(p.x), coord(p.y)); }

  // Every cell meeting the square [p - reach, p + reach]^2.
  template <class Fn>
  void for_each_near(const Vec2& p, double reach, Fn&& fn) const {
    const auto x0 = coord(p.x - reach), x1 = coord(p.x + reach);
    const auto y0 = coord(p.y - reach), y1 = coord(p.y + reach);
    for (auto i = x0; i <= x1; ++i) {
      for (auto j = y0; j <= y1; ++j) fn(pack_key(i, j), i, j);
    }
  }

 private:
  double side_;
};

// Annular bands of width `width`, each split into equal angular sectors whose
// outer arc is at most `width`.
class PolarGrid {
 public:
  explicit PolarGrid(double width) : width_(width) {}

  double width() const noexcept { return width_; }

  std::int64_t band(double r) const noexcept {
    return static_cast<std::int64_t>(std::floor(r / width_));
  }

  std::int64_t sectors(std::int64_t band) const noexcept {
    const double outer = static_cast<double>(band + 1) * width_;
    const double m = std::ceil(2.0 * std::numbers::pi * std::sinh(outer) / width_);
    return static_cast<std::int64_t>(std::clamp(m, 1.0, 1.0e9));
  }

  std::int64_t sector(std::int64_t band, double theta) const noexcept {
    const auto m = sectors(band);
    const auto s = static_cast<std::int64_t>(
        std::floor(theta / (2.0 * std::numbers::pi) * static_cast<double>(m)));
    return std::clamp<std::int64_t>(s, 0, m - 1);
  }

  CellKey key_of(const Polar& p) const noexcept {
    const auto k = band(p.r);
    return pack_key(k, sector(k, p.theta));
  }

  double band_lower(std::int64_t band) const noexcept {
    return static_cast<double>(band) * width_;
  }

  // Every cell that may hold a point within hyperbolic distance `reach` of p.
  // Uses 1 - cos(dtheta) <= (cosh(reach) - 1) / (sinh r sinh r_min), a
  // conservative bound from the hyperbolic law of cosines.
  template <class Fn>
  void for_each_near(const Polar& p, double reach, Fn&& fn) const {
    const auto k0 = band(std::max(0.0, p.r - reach));
    const auto k1 = band(p.r + reach);
    const double numer = std::cosh(reach) - 1.0;
    for (auto k = k0; k <= k1; ++k) {
      const auto m = sectors(k);
      const double r_min = std::max({band_lower(k), p.r - reach, 0.0});
      bool all = p.r == 0.0 || r_min == 0.0;
      double half = 0.0;
      if (!all) {
        const double c = numer / (std::sinh(p.r) * std::sinh(r_min));
        if (c >= 2.0) {
          all = true;
        } else {
          half = std::acos(1.0 - c);
          all = half >= std::numbers::pi;
        }
      }
      if (all) {
        for (std::int64_t s = 0; s < m; ++s) fn(pack_key(k, s), k, s);
        continue;
      }
      const double scale = static_cast<double>(m) / (2.0 * std::numbers::pi);
      const auto s0 = static_cast<std::int64_t>(std::floor((p.theta - half) * scale));
      const auto s1 = static_cast<std::int64_t>(std::floor((p.theta + half) * scale));
      const auto count = std::min<std::int64_t>(s1 - s0 + 1, m);
      for (std::int64_t t = 0; t < count; ++t) {
        const auto s = ((s0 + t) % m + m) % m;
        fn(pack_key(k, s), k, s);
      }
    }
  }

 private:
  double width_;
};

// Bucketed point set for continuum spaces; stores caller-supplied ids.
template <class Point>
class PointIndex {
 public:
  using Grid = std::conditional_t<std::is_same_v<Point, Vec2>, SquareGrid, PolarGrid>;

  explicit PointIndex(double cell) : grid_(cell) {}

  void insert(const Point& p, std::size_t id) { buckets_[grid_.key_of(p)].push_back(id); }

  template <class Fn>
  void for_each_candidate(const Point& p, double reach, Fn&& fn) const {
    grid_.for_each_near(p, reach, [&](CellKey key, auto, auto) {
      const auto it = buckets_.find(key);
      if (it == buckets_.end()) return;
      for (const auto id : it->second) fn(id);
    });
  }

  bool empty() const noexcept { return buckets_.empty(); }

 private:
  Grid grid_;
  std::unordered_map<CellKey, std::vector<std::size_t>> buckets_;
};

}  // namespace percolab

#endif  // PERCOLAB_SPATIAL_INDEX_HPP_
