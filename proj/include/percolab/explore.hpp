#ifndef PERCOLAB_EXPLORE_HPP_
#define PERCOLAB_EXPLORE_HPP_

#include <cstddef>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "percolab/boolean_model.hpp"
#include "percolab/point_process.hpp"
#include "percolab/tiling.hpp"

namespace percolab {

// Homogeneous Poisson Boolean model evaluated lazily over a tiling.
//
// Each tile owns a stream of arrival times with Exp(measure) gaps and one
// location per arrival; chi_lambda is the set of arrivals with time <= lambda.
// Every lambda therefore sees a sub-configuration of every larger lambda
// (exact monotone coupling), and a tile is only generated when the search
// reaches it.
template <MetricMeasureSpace S>
class CrossingExplorer {
 public:
  using P = point_t<S>;

  CrossingExplorer(const S& space, double radius, CrossingGeometry geometry = {},
                   double tile = 1.0)
      : tiling_(space, tile), radius_(radius), geometry_(geometry) {
    require(radius >= 0.0, "Boolean radius must be non-negative");
    if (space.window().padding < radius) {
      fail(ErrorCode::InvalidArgument, "window padding is smaller than the Boolean radius");
    }
  }

  const S& space() const noexcept { return tiling_.space(); }
  double radius() const noexcept { return radius_; }

  //! Core-to-shell crossing of trial `trial` under `seed` at intensity lambda.
  bool crosses(double lambda, std::uint64_t seed, std::uint64_t trial) {
    reset(lambda, seed, trial);
    const auto& sp = space();
    const double L = sp.window().radius;
    const double core = geometry_.core_radius(L);
    const double shell = geometry_.shell_radius(L, radius_);
    const double reach = 2.0 * radius_;

    std::priority_queue<std::pair<double, std::size_t>> frontier;
    bool hit = false;
    tiling_.cells_within(core, [&](CellKey key) {
      if (hit) return;
      const auto [begin, end] = ensure(key);
      for (std::size_t j = begin; j < end; ++j) {
        if (radial_[j] > core || visited_[j]) continue;
        if (radial_[j] >= shell) {
          hit = true;
          return;
        }
        visited_[j] = 1;
        frontier.emplace(radial_[j], j);
      }
    });
    if (hit) return true;

    std::vector<CellKey> near;
    while (!frontier.empty()) {
      const auto i = frontier.top().second;
      frontier.pop();
      const P p = points_[i];
      near.clear();
      tiling_.cells_near(p, reach, [&](CellKey key) { near.push_back(key); });
      for (const auto key : near) {
        const auto [begin, end] = ensure(key);
        for (std::size_t j = begin; j < end; ++j) {
          if (visited_[j]) continue;
          if constexpr (!Tiling<S>::exact_neighbors) {
            if (!sp.within(p, points_[j], reach)) continue;
          }
          if (radial_[j] >= shell) return true;
          visited_[j] = 1;
          frontier.emplace(radial_[j], j);
        }
      }
    }
    return false;
  }

  //! The same realization generated over the whole region.
  PointConfiguration<P> materialize(double lambda, std::uint64_t seed, std::uint64_t trial) {
    reset(lambda, seed, trial);
    PointConfiguration<P> config;
    config.seed = seed;
    config.intensity = Homogeneous{lambda};
    tiling_.cells_within(space().window().outer(), [&](CellKey key) {
      const auto [begin, end] = ensure(key);
      for (std::size_t j = begin; j < end; ++j) config.push(points_[j], key);
    });
    return config;
  }

  //! Number of tiles generated by the last call.
  std::size_t tiles_touched() const noexcept { return blocks_.size(); }

 private:
  void reset(double lambda, std::uint64_t seed, std::uint64_t trial) {
    require(lambda >= 0.0, "intensity must be non-negative");
    lambda_ = lambda;
    seed_ = seed;
    trial_ = trial;
    blocks_.clear();
    points_.clear();
    radial_.clear();
    visited_.clear();
  }

  std::pair<std::size_t, std::size_t> ensure(CellKey key) {
    const auto [it, fresh] = blocks_.try_emplace(key, points_.size(), points_.size());
    if (!fresh) return it->second;
    const auto& sp = space();
    Stream stream = make_stream(seed_, trial_, key, Purpose::Points);
    const double rate = tiling_.measure(key);
    double t = stream.exponential(rate);
    while (t <= lambda_) {
      P p = tiling_.sample(key, stream);
      if (sp.in_region(p)) {
        radial_.push_back(sp.radial(p));
        points_.push_back(std::move(p));
        visited_.push_back(0);
      }
      if constexpr (Tiling<S>::single_point) break;
      t += stream.exponential(rate);
    }
    it->second.second = points_.size();
    return it->second;
  }

  Tiling<S> tiling_;
  double radius_;
  CrossingGeometry geometry_;
  double lambda_ = 0.0;
  std::uint64_t seed_ = 0;
  std::uint64_t trial_ = 0;
  std::unordered_map<CellKey, std::pair<std::size_t, std::size_t>> blocks_;
  std::vector<P> points_;
  std::vector<double> radial_;
  std::vector<char> visited_;
};

}  // namespace percolab

#endif  // PERCOLAB_EXPLORE_HPP_
