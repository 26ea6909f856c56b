#ifndef PERCOLAB_PARTITION_HPP_
#define PERCOLAB_PARTITION_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "percolab/packing.hpp"
#include "percolab/space.hpp"

namespace percolab {

template <class P>
struct Cell {
  std::size_t index = 0;
  P center{};
  double measure_prime = 0.0;  // reference measure of the cell
  double measure_star = 0.0;   // induced measure; meaningful once induced
  bool in_window = true;       // center lies in the window (not the padding)
};

// Disjoint covering K_i = B(y_i, gamma) \ (B(y_1, gamma) u ... u B(y_{i-1}, gamma))
// of the simulation region: a point belongs to the smallest i with
// d(y_i, p) < gamma.
template <MetricMeasureSpace S>
class CellPartition {
 public:
  using P = point_t<S>;

  CellPartition(S space, double gamma, std::vector<P> centers, std::uint64_t seed)
      : space_(std::move(space)), gamma_(gamma), seed_(seed), index_(index_cell(gamma)) {
    require(gamma > 0.0, "partition radius gamma must be positive");
    require(!centers.empty(), "partition needs at least one center");
    cells_.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
      Cell<P> c;
      c.index = i;
      c.center = std::move(centers[i]);
      c.in_window = space_.in_window(c.center);
      cells_.push_back(std::move(c));
    }
    if constexpr (GraphSpace<S>) {
      build_vertex_table();
    } else {
      for (const auto& c : cells_) index_.insert(c.center, c.index);
    }
  }

  const S& space() const noexcept { return space_; }
  double gamma() const noexcept { return gamma_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const std::vector<Cell<P>>& cells() const noexcept { return cells_; }
  const Cell<P>& cell(std::size_t i) const { return cells_.at(i); }

  std::optional<std::size_t> locate(const P& p) const {
    if constexpr (GraphSpace<S>) {
      const auto v = space_.index_of(p);
      if (!v || vertex_cell_[*v] == kNone) return std::nullopt;
      return vertex_cell_[*v];
    } else {
      if (!space_.in_region(p)) return std::nullopt;
      std::size_t best = kNone;
      index_.for_each_candidate(p, gamma_, [&](std::size_t id) {
        if (id < best && space_.distance(cells_[id].center, p) < gamma_) best = id;
      });
      if (best == kNone) return std::nullopt;
      return best;
    }
  }

  //! Region vertices of cell i (graph kinds).
  const std::vector<P>& cell_vertices(std::size_t i) const
    requires GraphSpace<S>
  {
    return cell_vertices_.at(i);
  }

  void set_measure_prime(std::vector<double> values) {
    require(values.size() == cells_.size(), "measure table size mismatch");
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].measure_prime = values[i];
  }

  bool has_star() const noexcept { return has_star_; }
  void set_measure_star(const std::vector<double>& values) {
    require(values.size() == cells_.size(), "measure table size mismatch");
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      require(values[i] >= 0.0, "induced measure must be non-negative");
      cells_[i].measure_star = values[i];
    }
    has_star_ = true;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  static double index_cell(double gamma) { return gamma > 0.0 ? gamma : 1.0; }

  void build_vertex_table()
    requires GraphSpace<S>
  {
    const int strict = static_cast<int>(std::ceil(gamma_)) - 1;
    vertex_cell_.assign(space_.region_vertices().size(), kNone);
    cell_vertices_.resize(cells_.size());
    for (const auto& c : cells_) {
      if (strict < 0) break;
      for (const auto& v : space_.ball_vertices(c.center, strict)) {
        const auto i = space_.index_of(v);
        if (i && vertex_cell_[*i] == kNone) {
          vertex_cell_[*i] = c.index;
          cell_vertices_[c.index].push_back(v);
        }
      }
    }
  }

  S space_;
  double gamma_;
  std::uint64_t seed_;
  std::vector<Cell<P>> cells_;
  bool has_star_ = false;
  [[no_unique_address]] std::conditional_t<GraphSpace<S>, char, PointIndex<P>> index_;
  std::vector<std::size_t> vertex_cell_;
  std::vector<std::vector<P>> cell_vertices_;
};

struct PartitionOptions {
  int samples_per_cell = 10'000;
  PackingOptions packing{};
};

// Monte Carlo estimate of mu'(K_i): stratified samples of B(y_i, gamma),
// scored by the assignment rule. Returns (estimate, standard error).
template <ContinuumSpace S>
std::pair<double, double> estimate_cell_measure(const CellPartition<S>& partition, std::size_t i,
                                                int samples, std::uint64_t seed) {
  const auto& space = partition.space();
  const auto& y = partition.cell(i).center;
  const double gamma = partition.gamma();
  Stream stream = make_stream(seed, 0, i, Purpose::Measure);
  int hits = 0;
  for (int k = 0; k < samples; ++k) {
    const double u_radial = (static_cast<double>(k) + stream.uniform()) / samples;
    const auto p = space.ball_point(y, gamma, u_radial, stream.uniform());
    const auto c = partition.locate(p);
    hits += c && *c == i;
  }
  const double ball = space.measure_ball(y, gamma);
  const double frac = static_cast<double>(hits) / samples;
  return {ball * frac, ball * std::sqrt(frac * (1.0 - frac) / samples)};
}

//! Greedy gamma-net of the simulation region and its ball-difference cells.
template <MetricMeasureSpace S>
CellPartition<S> build_window_partition(const S& space, double gamma, std::uint64_t seed,
                                        const PartitionOptions& opts = {}) {
  require(gamma > 0.0, "partition radius gamma must be positive");
  std::vector<point_t<S>> centers;
  if (gamma > 2.0 * space.window().outer()) {
    centers.push_back(space.window().center);
  } else {
    Stream stream = make_stream(seed, 0, 0, Purpose::Partition);
    centers = greedy_packing(space, 0.5 * gamma, stream, opts.packing);
  }
  CellPartition<S> partition(space, gamma, std::move(centers), seed);
  std::vector<double> measure(partition.size(), 0.0);
  if constexpr (GraphSpace<S>) {
    // gamma/2 spacing lets earlier balls swallow a later cell whole; such a
    // cell owns no vertex, so dropping its center changes no assignment.
    std::vector<point_t<S>> kept;
    for (std::size_t i = 0; i < partition.size(); ++i) {
      if (!partition.cell_vertices(i).empty()) kept.push_back(partition.cell(i).center);
    }
    if (kept.size() < partition.size()) {
      partition = CellPartition<S>(space, gamma, std::move(kept), seed);
      measure.assign(partition.size(), 0.0);
    }
    for (std::size_t i = 0; i < partition.size(); ++i) {
      measure[i] = static_cast<double>(partition.cell_vertices(i).size());
    }
  } else {
    for (std::size_t i = 0; i < partition.size(); ++i) {
      measure[i] = estimate_cell_measure(partition, i, opts.samples_per_cell, seed).first;
    }
  }
  partition.set_measure_prime(std::move(measure));
  return partition;
}

//! Uniform point of K_i under the reference measure.
template <MetricMeasureSpace S>
point_t<S> sample_uniform_in_cell(const CellPartition<S>& partition, std::size_t i,
                                  Stream& stream) {
  const auto& cell = partition.cell(i);
  if (!(cell.measure_prime > 0.0)) {
    fail(ErrorCode::DegenerateCell, "degenerate cell " + std::to_string(i));
  }
  if constexpr (GraphSpace<S>) {
    const auto& verts = partition.cell_vertices(i);
    if (verts.empty()) fail(ErrorCode::DegenerateCell, "degenerate cell " + std::to_string(i));
    return verts[stream.below(verts.size())];
  } else {
    constexpr int kMaxAttempts = 1'000'000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      auto p = partition.space().sample_in_ball(cell.center, partition.gamma(), stream);
      const auto c = partition.locate(p);
      if (c && *c == i) return p;
    }
    fail(ErrorCode::DegenerateCell, "degenerate cell " + std::to_string(i) +
                                        ": rejection sampling exhausted");
  }
}

}  // namespace percolab

#endif  // PERCOLAB_PARTITION_HPP_
