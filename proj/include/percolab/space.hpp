#ifndef PERCOLAB_SPACE_HPP_
#define PERCOLAB_SPACE_HPP_

#include <concepts>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "percolab/cayley_graph.hpp"
#include "percolab/error.hpp"
#include "percolab/euclidean.hpp"
#include "percolab/hyperbolic.hpp"
#include "percolab/net_graph.hpp"
#include "percolab/rng.hpp"

namespace percolab {

template <class S>
concept MetricMeasureSpace =
    requires(const S& s, const typename S::point_type& p, double r, Stream& g) {
      { S::kind } -> std::convertible_to<SpaceKind>;
      { S::is_graph } -> std::convertible_to<bool>;
      { s.window() };
      { s.distance(p, p) } -> std::convertible_to<double>;
      { s.within(p, p, r) } -> std::convertible_to<bool>;
      { s.measure_ball(p, r) } -> std::convertible_to<double>;
      { s.sample_in_ball(p, r, g) } -> std::same_as<typename S::point_type>;
      { s.sample_in_region(g) } -> std::same_as<typename S::point_type>;
      { s.radial(p) } -> std::convertible_to<double>;
      { s.in_region(p) } -> std::convertible_to<bool>;
      { s.in_window(p) } -> std::convertible_to<bool>;
      { s.is_valid(p) } -> std::convertible_to<bool>;
      { s.region_measure() } -> std::convertible_to<double>;
    };

// Graph kinds: counting measure over an enumerable region.
template <class S>
concept GraphSpace =
    MetricMeasureSpace<S> && S::is_graph &&
    requires(const S& s, const typename S::point_type& p, std::size_t i, double r) {
      { s.region_vertices() } -> std::convertible_to<const std::vector<typename S::point_type>&>;
      { s.index_of(p) };
      { s.region_radial(i) } -> std::convertible_to<double>;
      { s.ball_vertices(p, r) } -> std::convertible_to<std::vector<typename S::point_type>>;
    };

// Continuum kinds: balls can be sampled from two uniforms (stratifiable).
template <class S>
concept ContinuumSpace =
    MetricMeasureSpace<S> && (!S::is_graph) &&
    requires(const S& s, const typename S::point_type& p, double r) {
      { s.ball_point(p, r, r, r) } -> std::same_as<typename S::point_type>;
    };

template <class S>
using point_t = typename S::point_type;

// Runtime-tagged forms for configuration-driven code paths.
using AnyPoint = std::variant<Vec2, Polar, GroupElement, NetVertex>;
using SpaceDescriptor = std::variant<EuclideanPlane, HyperbolicDisk, CayleyGraph, NetGraph>;

inline SpaceKind kind_of(const SpaceDescriptor& space) {
  return std::visit([](const auto& s) { return std::decay_t<decltype(s)>::kind; }, space);
}

namespace space_detail {

template <class S>
const point_t<S>& as_point(const S& space, const AnyPoint& p) {
  const auto* q = std::get_if<point_t<S>>(&p);
  if (q == nullptr || !space.is_valid(*q)) {
    fail(ErrorCode::ForeignPoint,
         "foreign point: not a point of a " + to_string(S::kind) + " space");
  }
  return *q;
}

}  // namespace space_detail

inline double distance(const SpaceDescriptor& space, const AnyPoint& p, const AnyPoint& q) {
  return std::visit(
      [&](const auto& s) {
        return s.distance(space_detail::as_point(s, p), space_detail::as_point(s, q));
      },
      space);
}

inline double measure_ball(const SpaceDescriptor& space, const AnyPoint& center, double r) {
  require(r >= 0.0, "ball radius must be non-negative");
  return std::visit(
      [&](const auto& s) { return s.measure_ball(space_detail::as_point(s, center), r); },
      space);
}

}  // namespace percolab

#endif  // PERCOLAB_SPACE_HPP_
