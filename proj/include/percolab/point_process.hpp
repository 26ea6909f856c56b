#ifndef PERCOLAB_POINT_PROCESS_HPP_
#define PERCOLAB_POINT_PROCESS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <type_traits>
#include <vector>

#include "percolab/partition.hpp"
#include "percolab/space.hpp"

namespace percolab {

struct Homogeneous {
  double lambda = 0.0;
};

// Intensity density Lambda with lower <= Lambda <= upper.
template <class P>
struct Bounded {
  std::function<double(const P&)> density;
  double lower = 0.0;
  double upper = 0.0;
};

template <class P>
using IntensitySpec = std::variant<Homogeneous, Bounded<P>>;

enum class MeasureField { Prime, Star };

template <class P>
struct PointConfiguration {
  std::vector<P> points;
  std::vector<std::size_t> cells;  // cell index of each point
  std::uint64_t seed = 0;
  IntensitySpec<P> intensity = Homogeneous{};

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  void push(P p, std::size_t cell) {
    points.push_back(std::move(p));
    cells.push_back(cell);
  }

  std::vector<std::size_t> cell_counts(std::size_t n_cells) const {
    std::vector<std::size_t> counts(n_cells, 0);
    for (const auto c : cells) counts.at(c) += 1;
    return counts;
  }
};

//! p_m = 1 - exp(-lambda * nu({m})).
inline double bernoulli_retention(double lambda, double atom_mass) {
  require(lambda >= 0.0 && atom_mass >= 0.0, "retention needs lambda, atom mass >= 0");
  return -std::expm1(-lambda * atom_mass);
}

template <class P>
void validate_bounded(const Bounded<P>& spec) {
  require(static_cast<bool>(spec.density), "bounded intensity needs a density");
  require(spec.lower > 0.0 && spec.lower <= spec.upper,
          "bounded intensity needs 0 < lambda1 <= lambda2");
}

namespace pp_detail {

template <class P>
double checked_density(const Bounded<P>& spec, const P& p) {
  const double v = spec.density(p);
  if (!(v >= spec.lower && v <= spec.upper)) {
    fail(ErrorCode::InvalidArgument, "intensity density " + std::to_string(v) +
                                         " outside [lambda1, lambda2]");
  }
  return v;
}

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail(ErrorCode::InvalidArgument,
         "retention probability " + std::to_string(p) + " outside [0, 1]");
  }
}

}  // namespace pp_detail

//! Spot-check lambda1 <= Lambda <= lambda2 on uniformly sampled region points.
template <MetricMeasureSpace S>
void spot_check_bounded(const S& space, const Bounded<point_t<S>>& spec, std::uint64_t seed,
                        int samples = 10'000) {
  validate_bounded(spec);
  Stream stream = make_stream(seed, 0, 0, Purpose::Sampling);
  for (int k = 0; k < samples; ++k) {
    pp_detail::checked_density(spec, space.sample_in_region(stream));
  }
}

// Per cell: N_i ~ Poisson(rate * nu(K_i)) and N_i i.i.d. points of the
// normalized restriction of the reference measure. Bounded intensities
// sample the upper-rate process and keep each point with Lambda / upper.
template <MetricMeasureSpace S>
PointConfiguration<point_t<S>> sample_poisson(const CellPartition<S>& partition,
                                              const IntensitySpec<point_t<S>>& intensity,
                                              MeasureField field, std::uint64_t seed) {
  using P = point_t<S>;
  if (field == MeasureField::Star && !partition.has_star()) {
    fail(ErrorCode::MeasureNotInduced, "measure not induced on this partition");
  }
  const auto* bounded = std::get_if<Bounded<P>>(&intensity);
  double rate = 0.0;
  if (bounded) {
    validate_bounded(*bounded);
    rate = bounded->upper;
  } else {
    rate = std::get<Homogeneous>(intensity).lambda;
    require(rate >= 0.0, "intensity must be non-negative");
  }
  PointConfiguration<P> config;
  config.seed = seed;
  config.intensity = intensity;
  for (const auto& cell : partition.cells()) {
    const double nu = field == MeasureField::Star ? cell.measure_star : cell.measure_prime;
    const double mean = rate * nu;
    if (!(mean > 0.0)) continue;
    Stream stream = make_stream(seed, 0, cell.index, Purpose::Points);
    std::poisson_distribution<long long> count_dist(mean);
    const long long n = count_dist(stream);
    for (long long k = 0; k < n; ++k) {
      P p = sample_uniform_in_cell(partition, cell.index, stream);
      if (bounded) {
        const double keep = pp_detail::checked_density(*bounded, p) / bounded->upper;
        if (!(stream.uniform() < keep)) continue;
      }
      config.push(std::move(p), cell.index);
    }
  }
  return config;
}

//! Bernoulli process on a graph region: vertex m is present with p(m).
template <GraphSpace S>
PointConfiguration<point_t<S>> sample_bernoulli(
    const S& space, const std::function<double(const point_t<S>&)>& retention,
    std::uint64_t seed) {
  PointConfiguration<point_t<S>> config;
  config.seed = seed;
  const auto& verts = space.region_vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const double p = retention(verts[i]);
    pp_detail::check_probability(p);
    Stream stream = make_stream(seed, 0, i, Purpose::Points);
    if (stream.uniform() < p) config.push(verts[i], i);
  }
  return config;
}

//! Independent thinning: each point kept with its retention probability.
template <class P>
PointConfiguration<P> thin(const PointConfiguration<P>& config,
                           const std::function<double(const std::type_identity_t<P>&)>& retention,
                           std::uint64_t seed) {
  PointConfiguration<P> out;
  out.seed = seed;
  out.intensity = config.intensity;
  Stream stream = make_stream(seed, 0, 0, Purpose::Thinning);
  for (std::size_t k = 0; k < config.size(); ++k) {
    const double p = retention(config.points[k]);
    pp_detail::check_probability(p);
    if (stream.uniform() < p) out.push(config.points[k], config.cells[k]);
  }
  return out;
}

//! True iff `sub` is a sub-sequence of `super` (thinning preserves order).
template <class P>
bool is_subconfiguration(const PointConfiguration<P>& sub, const PointConfiguration<P>& super) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    while (j < super.size() &&
           !(super.points[j] == sub.points[i] && super.cells[j] == sub.cells[i])) {
      ++j;
    }
    if (j == super.size()) return false;
    ++j;
  }
  return true;
}

template <class P>
struct CoupledPair {
  PointConfiguration<P> low;
  PointConfiguration<P> high;
};

//! chi_low subset of chi_high with chi_low a (lambda_low / lambda_high)-thinning.
template <MetricMeasureSpace S>
CoupledPair<point_t<S>> couple_monotone(const CellPartition<S>& partition, double lambda_low,
                                        double lambda_high, std::uint64_t seed) {
  require(lambda_low > 0.0, "lambda_low must be positive");
  if (lambda_low > lambda_high) {
    fail(ErrorCode::InvalidArgument, "lambda_low exceeds lambda_high");
  }
  CoupledPair<point_t<S>> pair;
  pair.high = sample_poisson(partition, Homogeneous{lambda_high}, MeasureField::Prime, seed);
  const double p = lambda_low / lambda_high;
  pair.low = thin<point_t<S>>(pair.high, [p](const point_t<S>&) { return p; },
                              derive_seed(seed, 0, 0, Purpose::Thinning));
  pair.low.intensity = Homogeneous{lambda_low};
  return pair;
}

template <class P>
struct Sandwich {
  PointConfiguration<P> low;   // homogeneous lambda1
  PointConfiguration<P> mid;   // intensity Lambda
  PointConfiguration<P> high;  // homogeneous lambda2
};

// One Poisson(lambda2 mu) process and one uniform mark per point; the two
// thinnings (lambda1/lambda2 and Lambda/lambda2) share the marks, which makes
// chi_lambda1 subset chi_Lambda subset chi_lambda2 hold pointwise.
template <MetricMeasureSpace S>
Sandwich<point_t<S>> sandwich_bounded(const CellPartition<S>& partition,
                                      const Bounded<point_t<S>>& intensity,
                                      std::uint64_t seed) {
  using P = point_t<S>;
  validate_bounded(intensity);
  Sandwich<P> out;
  out.high = sample_poisson(partition, Homogeneous{intensity.upper}, MeasureField::Prime, seed);
  out.mid.seed = out.low.seed = seed;
  out.mid.intensity = intensity;
  out.low.intensity = Homogeneous{intensity.lower};
  Stream marks = make_stream(seed, 0, 0, Purpose::Marks);
  const double low_keep = intensity.lower / intensity.upper;
  for (std::size_t k = 0; k < out.high.size(); ++k) {
    const auto& p = out.high.points[k];
    const double u = marks.uniform();
    const double mid_keep = pp_detail::checked_density(intensity, p) / intensity.upper;
    if (u < mid_keep) out.mid.push(p, out.high.cells[k]);
    if (u < low_keep) out.low.push(p, out.high.cells[k]);
  }
  return out;
}

}  // namespace percolab

#endif  // PERCOLAB_POINT_PROCESS_HPP_
