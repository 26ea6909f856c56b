#ifndef PERCOLAB_PACKING_HPP_
#define PERCOLAB_PACKING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "percolab/space.hpp"
#include "percolab/spatial_index.hpp"

namespace percolab {

// Region points such that every region point lies within `h` of one of them.
// Grid points that fall outside the region are projected radially onto its
// boundary (a non-expansive map onto a ball of either continuum geometry).
inline std::vector<Vec2> covering_grid(const EuclideanPlane& space, double h) {
  require(h > 0.0, "grid spacing must be positive");
  const auto& w = space.window();
  const double outer = w.outer();
  std::vector<Vec2> pts;
  const auto n = static_cast<std::int64_t>(std::ceil(outer / h)) + 1;
  for (std::int64_t i = -n; i <= n; ++i) {
    for (std::int64_t j = -n; j <= n; ++j) {
      Vec2 p{w.center.x + static_cast<double>(i) * h, w.center.y + static_cast<double>(j) * h};
      const double r = space.radial(p);
      if (r > outer + h) continue;
      if (r > outer) {
        const double s = outer / r;
        p = {w.center.x + (p.x - w.center.x) * s, w.center.y + (p.y - w.center.y) * s};
      }
      pts.push_back(p);
    }
  }
  return pts;
}

// Rings at multiples of h (plus the boundary ring); points on a ring are
// spaced by at most h of arc.
inline std::vector<Polar> covering_grid(const HyperbolicDisk& space, double h) {
  require(h > 0.0, "grid spacing must be positive");
  const double outer = space.window().outer();
  std::vector<Polar> pts{{0.0, 0.0}};
  const auto rings = static_cast<std::int64_t>(std::ceil(outer / h));
  for (std::int64_t k = 1; k <= rings; ++k) {
    const double r = std::min(outer, static_cast<double>(k) * h);
    const auto m = static_cast<std::int64_t>(
        std::ceil(2.0 * std::numbers::pi * std::sinh(r) / h));
    for (std::int64_t s = 0; s < m; ++s) {
      pts.push_back({r, 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(m)});
    }
  }
  return pts;
}

// Greedy packing: a candidate is accepted iff it is at distance >= separation
// from every accepted center.
template <class S>
class Packing;

template <ContinuumSpace S>
class Packing<S> {
 public:
  using P = point_t<S>;

  Packing(const S& space, double separation)
      : space_(space), separation_(separation), index_(separation) {}

  bool admits(const P& p) const {
    bool ok = true;
    index_.for_each_candidate(p, separation_, [&](std::size_t id) {
      if (ok && space_.distance(centers_[id], p) < separation_) ok = false;
    });
    return ok;
  }

  void accept(const P& p) {
    index_.insert(p, centers_.size());
    centers_.push_back(p);
  }

  void sweep(double spacing) {
    for (const auto& g : covering_grid(space_, spacing)) {
      if (admits(g)) accept(g);
    }
  }

  const std::vector<P>& centers() const noexcept { return centers_; }

 private:
  const S& space_;
  double separation_;
  PointIndex<P> index_;
  std::vector<P> centers_;
};

template <GraphSpace S>
class Packing<S> {
 public:
  using P = point_t<S>;

  Packing(const S& space, double separation)
      : space_(space),
        strict_radius_(static_cast<int>(std::ceil(separation)) - 1),
        blocked_(space.region_vertices().size(), 0) {}

  bool admits(const P& p) const {
    const auto i = space_.index_of(p);
    return i && !blocked_[*i];
  }

  void accept(const P& p) {
    centers_.push_back(p);
    if (strict_radius_ < 0) return;
    for (const auto& v : space_.ball_vertices(p, strict_radius_)) {
      if (const auto i = space_.index_of(v)) blocked_[*i] = 1;
    }
  }

  void sweep(double /*spacing*/) {
    for (const auto& v : space_.region_vertices()) {
      if (admits(v)) accept(v);
    }
  }

  const std::vector<P>& centers() const noexcept { return centers_; }

 private:
  const S& space_;
  int strict_radius_;
  std::vector<char> blocked_;
  std::vector<P> centers_;
};

struct PackingOptions {
  int rejection_cutoff = 1000;
  // Completion sweep spacing as a fraction of the separation (continuum only).
  double sweep_fraction = 0.5;
};

// Random greedy phase until `rejection_cutoff` consecutive rejections, then
// a deterministic sweep so that the result is certifiably maximal on a grid.
template <MetricMeasureSpace S>
std::vector<point_t<S>> greedy_packing(const S& space, double separation, Stream& stream,
                                       const PackingOptions& opts = {}) {
  require(separation > 0.0, "packing separation must be positive");
  Packing<S> packing(space, separation);
  int rejected = 0;
  while (rejected < opts.rejection_cutoff) {
    const auto p = space.sample_in_region(stream);
    if (packing.admits(p)) {
      packing.accept(p);
      rejected = 0;
    } else {
      ++rejected;
    }
  }
  packing.sweep(separation * opts.sweep_fraction);
  return packing.centers();
}

}  // namespace percolab

#endif  // PERCOLAB_PACKING_HPP_
