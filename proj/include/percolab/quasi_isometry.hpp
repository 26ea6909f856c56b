#ifndef PERCOLAB_QUASI_ISOMETRY_HPP_
#define PERCOLAB_QUASI_ISOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "percolab/boolean_model.hpp"
#include "percolab/packing.hpp"
#include "percolab/partition.hpp"
#include "percolab/point_process.hpp"
#include "percolab/space.hpp"

namespace percolab {

struct QiParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
};

inline void validate_params(const QiParams& p) {
  require(p.alpha >= 1.0, "quasi-isometry alpha must be >= 1");
  require(p.beta >= 0.0, "quasi-isometry beta must be >= 0");
  require(p.gamma >= 0.0, "quasi-isometry gamma must be >= 0");
}

enum class QiStatus { Unchecked, PassedOnSample, Violated };
enum class QiAxiom { LowerBound, UpperBound, Density };

inline std::string to_string(QiStatus s) {
  switch (s) {
    case QiStatus::Unchecked: return "unchecked";
    case QiStatus::PassedOnSample: return "passed_on_sample";
    case QiStatus::Violated: return "violated";
  }
  return "unknown";
}

inline std::string to_string(QiAxiom a) {
  switch (a) {
    case QiAxiom::LowerBound: return "lower_bound";
    case QiAxiom::UpperBound: return "upper_bound";
    case QiAxiom::Density: return "density";
  }
  return "unknown";
}

// For a distance axiom x, y are the offending pair; for density z is the
// codomain point left uncovered (observed = its distance to the image).
template <class PD, class PC>
struct QiWitness {
  QiAxiom axiom = QiAxiom::LowerBound;
  PD x{};
  PD y{};
  PC z{};
  double observed = 0.0;
  double bound = 0.0;
};

template <class PD, class PC>
struct QiVerification {
  QiStatus status = QiStatus::Unchecked;
  std::optional<QiWitness<PD, PC>> witness;
  std::size_t pairs_tested = 0;
  std::size_t codomain_tested = 0;
};

template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
struct QuasiIsometryMap {
  using DomainPoint = point_t<Dom>;
  using CodomainPoint = point_t<Cod>;

  std::string name;
  Dom domain;
  Cod codomain;
  std::function<CodomainPoint(const DomainPoint&)> forward;
  QiParams params;
  // Optional coarse inverse; when present the density axiom is tested as
  // d(F(G(z)), z) <= gamma, which is exact rather than sample-limited.
  std::function<DomainPoint(const CodomainPoint&)> inverse_hint;
  QiVerification<DomainPoint, CodomainPoint> verified;

  CodomainPoint operator()(const DomainPoint& x) const { return forward(x); }
};

namespace qi_detail {

inline constexpr double kTolerance = 1e-9;

template <class Map>
bool check_pair(const Map& F, const typename Map::DomainPoint& x,
                const typename Map::DomainPoint& y,
                QiVerification<typename Map::DomainPoint, typename Map::CodomainPoint>& out) {
  const auto& p = F.params;
  const double dm = F.domain.distance(x, y);
  const double dn = F.codomain.distance(F(x), F(y));
  ++out.pairs_tested;
  const double lower = dm / p.alpha - p.beta;
  const double upper = p.alpha * dm + p.beta;
  if (dn < lower - kTolerance) {
    out.status = QiStatus::Violated;
    out.witness = {QiAxiom::LowerBound, x, y, {}, dn, lower};
    return false;
  }
  if (dn > upper + kTolerance) {
    out.status = QiStatus::Violated;
    out.witness = {QiAxiom::UpperBound, x, y, {}, dn, upper};
    return false;
  }
  return true;
}

template <class Map>
bool check_density(const Map& F, const typename Map::CodomainPoint& z,
                   std::span<const typename Map::CodomainPoint> images, double slack,
                   QiVerification<typename Map::DomainPoint, typename Map::CodomainPoint>& out) {
  const double gamma = F.params.gamma;
  ++out.codomain_tested;
  double best = std::numeric_limits<double>::infinity();
  if (F.inverse_hint) {
    best = F.codomain.distance(F(F.inverse_hint(z)), z);
  } else {
    for (const auto& w : images) {
      best = std::min(best, F.codomain.distance(w, z));
      if (best <= gamma + slack) break;
    }
  }
  if (best > gamma + slack + kTolerance) {
    out.status = QiStatus::Violated;
    out.witness = {QiAxiom::Density, {}, {}, z, best, gamma + slack};
    return false;
  }
  return true;
}

}  // namespace qi_detail

//! Exhaustive check: every pair of `domain_points` and every codomain point.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
QiVerification<point_t<Dom>, point_t<Cod>> qi_check_points(
    const QuasiIsometryMap<Dom, Cod>& F, const std::vector<point_t<Dom>>& domain_points,
    const std::vector<point_t<Cod>>& codomain_points) {
  validate_params(F.params);
  QiVerification<point_t<Dom>, point_t<Cod>> out;
  for (std::size_t a = 0; a < domain_points.size(); ++a) {
    for (std::size_t b = a + 1; b < domain_points.size(); ++b) {
      if (!qi_detail::check_pair(F, domain_points[a], domain_points[b], out)) return out;
    }
  }
  std::vector<point_t<Cod>> images;
  images.reserve(domain_points.size());
  for (const auto& x : domain_points) images.push_back(F(x));
  for (const auto& z : codomain_points) {
    if (!qi_detail::check_density(F, z, std::span<const point_t<Cod>>(images), 0.0, out)) {
      return out;
    }
  }
  out.status = QiStatus::PassedOnSample;
  return out;
}

// Sampled check. Pairs are drawn uniformly from the domain region; density is
// tested at `sample_pairs` codomain window points. Without an inverse hint the
// image pool is the domain region (graphs) or a covering grid of spacing h
// (continuum), and the density bound is loosened by alpha * h + beta, the
// image-side gap a grid of spacing h can leave.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
QiVerification<point_t<Dom>, point_t<Cod>> qi_check(const QuasiIsometryMap<Dom, Cod>& F,
                                                     std::size_t sample_pairs, Stream& stream) {
  validate_params(F.params);
  QiVerification<point_t<Dom>, point_t<Cod>> out;
  for (std::size_t k = 0; k < sample_pairs; ++k) {
    const auto x = F.domain.sample_in_region(stream);
    const auto y = F.domain.sample_in_region(stream);
    if (!qi_detail::check_pair(F, x, y, out)) return out;
  }
  std::vector<point_t<Cod>> images;
  double slack = 0.0;
  if (!F.inverse_hint) {
    if constexpr (GraphSpace<Dom>) {
      for (const auto& v : F.domain.region_vertices()) images.push_back(F(v));
    } else {
      const double h = std::max(0.25, F.domain.window().outer() / 256.0);
      for (const auto& g : covering_grid(F.domain, h)) images.push_back(F(g));
      slack = F.params.alpha * h + F.params.beta;
    }
  }
  const auto& cw = F.codomain.window();
  for (std::size_t k = 0; k < sample_pairs; ++k) {
    auto z = F.codomain.sample_in_ball(cw.center, cw.radius, stream);
    if (!qi_detail::check_density(F, z, std::span<const point_t<Cod>>(images), slack, out)) {
      return out;
    }
  }
  out.status = QiStatus::PassedOnSample;
  return out;
}

template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
struct QuasiInverse {
  QuasiIsometryMap<Cod, Dom> map;
  double gamma_tilde = 0.0;  // max observed d(G(F(x)), x) over the test points
};

// G(z): take the net point nearest z, then the first domain sample point whose
// image is nearest that net point. The parameters are copied from F.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
QuasiInverse<Dom, Cod> quasi_inverse(const QuasiIsometryMap<Dom, Cod>& F,
                                     const std::vector<point_t<Cod>>& codomain_net,
                                     const std::vector<point_t<Dom>>& domain_sample,
                                     const std::vector<point_t<Dom>>& test_points) {
  if (F.verified.status != QiStatus::PassedOnSample) {
    fail(ErrorCode::InvalidArgument, "quasi-inverse requires a map that passed qi_check");
  }
  if (domain_sample.empty()) fail(ErrorCode::EmptySample, "empty domain sample for quasi-inverse");
  require(!codomain_net.empty(), "quasi-inverse needs a non-empty codomain net");

  std::vector<point_t<Cod>> images;
  images.reserve(domain_sample.size());
  for (const auto& x : domain_sample) images.push_back(F(x));
  std::vector<point_t<Dom>> table;
  table.reserve(codomain_net.size());
  for (const auto& y : codomain_net) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < images.size(); ++k) {
      const double d = F.codomain.distance(images[k], y);
      if (d < best_d) {
        best_d = d;
        best = k;
        if (d == 0.0) break;
      }
    }
    table.push_back(domain_sample[best]);
  }

  const Cod cod = F.codomain;
  auto G = [cod, net = codomain_net, table](const point_t<Cod>& z) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < net.size(); ++j) {
      const double d = cod.distance(net[j], z);
      if (d < best_d) {
        best_d = d;
        best = j;
        if (d == 0.0) break;
      }
    }
    return table[best];
  };
  QuasiInverse<Dom, Cod> out{
      {F.name + "^-1", F.codomain, F.domain, std::move(G), F.params, F.forward, {}}, 0.0};
  for (const auto& x : test_points) {
    out.gamma_tilde = std::max(out.gamma_tilde, F.domain.distance(out.map(F(x)), x));
  }
  return out;
}

//! R' = alpha R + beta, so that F(B(p, R)) lies in B(F(p), R').
inline double radius_forward(double R, double alpha, double beta) {
  require(R > 0.0, "radius must be positive");
  return alpha * R + beta;
}

//! Midpoint of the feasible interval k < R' < min(2k, R/alpha - beta); then
//! B(F(p), R') cap F(M) lies in F(B(p, R)).
inline double radius_backward(double R, double alpha, double beta, double k) {
  const double bound = alpha * beta + 2.0 * alpha * k;
  if (!(R > bound)) {
    fail(ErrorCode::RadiusTooSmall,
         "radius too small for backward transport: R = " + std::to_string(R) +
             " must exceed alpha*beta + 2*alpha*k = " + std::to_string(bound));
  }
  return 0.5 * (k + std::min(2.0 * k, R / alpha - beta));
}

struct InduceOptions {
  // Partition radius used when gamma = 0 (continuum codomains); graph
  // codomains with gamma <= 1 get singleton cells either way.
  double min_gamma = 1.0;
  PartitionOptions partition{};
  std::size_t measure_samples = 4'000'000;
};

template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
double partition_radius(const QuasiIsometryMap<Dom, Cod>& F, const InduceOptions& opts = {}) {
  return F.params.gamma > 0.0 ? F.params.gamma : opts.min_gamma;
}

//! Greedy ball-difference covering of the codomain window with radius gamma.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
CellPartition<Cod> induce_partition(const QuasiIsometryMap<Dom, Cod>& F, std::uint64_t seed,
                                    const InduceOptions& opts = {}) {
  return build_window_partition(F.codomain, partition_radius(F, opts), seed, opts.partition);
}

template <class PD>
struct PreimageReport {
  std::size_t samples = 0;
  std::size_t unassigned = 0;      // image outside every cell
  double max_cell_diameter = 0.0;  // largest sampled intra-preimage distance
  double diameter_bound = 0.0;     // alpha (2 gamma + beta)
};

// Domain window points (all of them for graphs, `samples` uniform draws
// otherwise) binned by the cell of their image.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
PreimageReport<point_t<Dom>> check_preimages(const QuasiIsometryMap<Dom, Cod>& F,
                                             const CellPartition<Cod>& partition,
                                             std::size_t samples, std::uint64_t seed) {
  std::vector<point_t<Dom>> xs;
  if constexpr (GraphSpace<Dom>) {
    for (const auto& v : F.domain.region_vertices()) {
      if (F.domain.in_window(v)) xs.push_back(v);
    }
  } else {
    Stream stream = make_stream(seed, 0, 0, Purpose::Sampling);
    const auto& w = F.domain.window();
    for (std::size_t k = 0; k < samples; ++k) {
      xs.push_back(F.domain.sample_in_ball(w.center, w.radius, stream));
    }
  }
  PreimageReport<point_t<Dom>> report;
  report.samples = xs.size();
  report.diameter_bound = F.params.alpha * (2.0 * partition.gamma() + F.params.beta);
  std::vector<std::vector<std::size_t>> members(partition.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (const auto c = partition.locate(F(xs[k]))) {
      members[*c].push_back(k);
    } else {
      ++report.unassigned;
    }
  }
  for (const auto& m : members) {
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        report.max_cell_diameter =
            std::max(report.max_cell_diameter, F.domain.distance(xs[m[a]], xs[m[b]]));
      }
    }
  }
  return report;
}

template <MetricMeasureSpace Cod>
struct InducedMeasureTable {
  CellPartition<Cod> partition;  // measure_star filled
  std::vector<double> star_se;   // Monte Carlo standard error (0 when exact)
  double domain_measure = 0.0;   // mu of the domain window
  double unassigned = 0.0;       // domain mass whose image meets no cell
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  double star(std::size_t i) const { return partition.cell(i).measure_star; }
  double total_star() const {
    double s = 0.0;
    for (const auto& c : partition.cells()) s += c.measure_star;
    return s;
  }
};

// mu*(K_i) = mu(F^-1(K_i)) over the domain window: exact counts for graph
// domains, stratified Monte Carlo otherwise.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
InducedMeasureTable<Cod> induce_measure_table(const QuasiIsometryMap<Dom, Cod>& F,
                                              CellPartition<Cod> partition, std::uint64_t seed,
                                              const InduceOptions& opts = {}) {
  std::vector<double> star(partition.size(), 0.0), se(partition.size(), 0.0);
  InducedMeasureTable<Cod> table{partition, {}, 0.0, 0.0, 0, seed};
  if constexpr (GraphSpace<Dom>) {
    for (const auto& v : F.domain.region_vertices()) {
      if (!F.domain.in_window(v)) continue;
      table.domain_measure += 1.0;
      ++table.samples;
      if (const auto c = partition.locate(F(v))) {
        star[*c] += 1.0;
      } else {
        table.unassigned += 1.0;
      }
    }
  } else {
    const auto& w = F.domain.window();
    const double total = F.domain.window_measure();
    const auto side = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(opts.measure_samples, 1)))));
    const std::size_t n = side * side;
    Stream stream = make_stream(seed, 0, 0, Purpose::Measure);
    std::vector<std::size_t> hits(partition.size(), 0);
    std::size_t lost = 0;
    for (std::size_t a = 0; a < side; ++a) {
      for (std::size_t b = 0; b < side; ++b) {
        const double ur = (static_cast<double>(a) + stream.uniform()) / static_cast<double>(side);
        const double ua = (static_cast<double>(b) + stream.uniform()) / static_cast<double>(side);
        const auto x = F.domain.ball_point(w.center, w.radius, ur, ua);
        if (const auto c = partition.locate(F(x))) {
          ++hits[*c];
        } else {
          ++lost;
        }
      }
    }
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < partition.size(); ++i) {
      const double f = static_cast<double>(hits[i]) / dn;
      star[i] = total * f;
      se[i] = total * std::sqrt(f * (1.0 - f) / dn);
    }
    table.domain_measure = total;
    table.unassigned = total * static_cast<double>(lost) / dn;
    table.samples = n;
  }
  table.partition.set_measure_star(star);
  table.star_se = std::move(se);
  return table;
}

struct MmConstants {
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
  double Cbar1 = 0.0, Cbar2 = 0.0;
  std::size_t cells = 0;  // window cells inspected
  bool compatible = false;
  std::string violation;
};

//! Bounds of mu' and mu* over the window cells.
template <MetricMeasureSpace Cod>
MmConstants mm_check(const InducedMeasureTable<Cod>& table) {
  MmConstants m;
  m.C1 = m.C3 = std::numeric_limits<double>::infinity();
  for (const auto& c : table.partition.cells()) {
    if (!c.in_window) continue;
    ++m.cells;
    m.C1 = std::min(m.C1, c.measure_prime);
    m.C2 = std::max(m.C2, c.measure_prime);
    m.C3 = std::min(m.C3, c.measure_star);
    m.C4 = std::max(m.C4, c.measure_star);
  }
  if (m.cells == 0) {
    m.violation = "no window cells";
    m.C1 = m.C3 = 0.0;
    return m;
  }
  m.Cbar1 = m.C2 > 0.0 ? m.C3 / m.C2 : 0.0;
  m.Cbar2 = m.C1 > 0.0 ? m.C4 / m.C1 : std::numeric_limits<double>::infinity();
  if (!(m.C1 > 0.0)) {
    m.violation = "C1 = 0: a window cell has zero reference measure";
  } else if (!(m.C3 > 0.0)) {
    m.violation = "C3 = 0: the map misses a window cell";
  } else if (!std::isfinite(m.C2) || !std::isfinite(m.C4)) {
    m.violation = "unbounded cell measure";
  } else {
    m.compatible = true;
  }
  return m;
}

// mu*(D) = sum_i mu'(D cap K_i) mu*(K_i) / mu'(K_i). Graph codomain: D is a
// vertex set, exact.
template <GraphSpace Cod>
double induced_measure(const InducedMeasureTable<Cod>& table,
                       const std::vector<point_t<Cod>>& region) {
  const auto& part = table.partition;
  if (!part.has_star()) fail(ErrorCode::MeasureNotInduced, "measure not induced on this partition");
  double total = 0.0;
  for (const auto& v : region) {
    const auto c = part.locate(v);
    if (!c) fail(ErrorCode::InvalidArgument, "region leaves the partitioned window");
    const auto& cell = part.cell(*c);
    total += cell.measure_star / cell.measure_prime;
  }
  if (region.empty()) fail(ErrorCode::RegionTooThin, "region too thin for sampling: no vertices");
  return total;
}

// Continuum codomain: D given by a membership test inside a bounding ball;
// mu'(D cap K_i) is estimated from `samples` uniform points of the ball.
template <class P>
struct SampledRegion {
  P center{};
  double radius = 0.0;
  std::function<bool(const P&)> contains;
};

template <ContinuumSpace Cod>
double induced_measure(const InducedMeasureTable<Cod>& table,
                       const SampledRegion<point_t<Cod>>& region, std::size_t samples,
                       std::uint64_t seed) {
  const auto& part = table.partition;
  if (!part.has_star()) fail(ErrorCode::MeasureNotInduced, "measure not induced on this partition");
  const auto& space = part.space();
  Stream stream = make_stream(seed, 0, 0, Purpose::Sampling);
  std::vector<std::size_t> hits(part.size(), 0);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const auto p = space.sample_in_ball(region.center, region.radius, stream);
    if (!region.contains(p)) continue;
    const auto c = part.locate(p);
    if (!c) fail(ErrorCode::InvalidArgument, "region leaves the partitioned window");
    ++hits[*c];
    ++inside;
  }
  if (inside == 0) fail(ErrorCode::RegionTooThin, "region too thin for sampling");
  const double ball = space.measure_ball(region.center, region.radius);
  double total = 0.0;
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (hits[i] == 0) continue;
    const auto& cell = part.cell(i);
    const double mu_prime = ball * static_cast<double>(hits[i]) / static_cast<double>(samples);
    total += mu_prime * cell.measure_star / cell.measure_prime;
  }
  return total;
}

//! mu'(D) * sum over the listed cells of mu*(K_i) / mu'(K_i), as displayed.
template <MetricMeasureSpace Cod>
double induced_measure_displayed(const InducedMeasureTable<Cod>& table, double mu_prime_D,
                                 const std::vector<std::size_t>& cells_meeting_D) {
  if (cells_meeting_D.empty()) fail(ErrorCode::RegionTooThin, "region too thin for sampling");
  double ratio = 0.0;
  for (const auto i : cells_meeting_D) {
    const auto& cell = table.partition.cell(i);
    ratio += cell.measure_star / cell.measure_prime;
  }
  return mu_prime_D * ratio;
}

//! Re-index a domain configuration by preimage cell: point k goes to the
//! cell holding F(x_k). Points whose image meets no cell are dropped.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
PointConfiguration<point_t<Dom>> index_by_preimage(const QuasiIsometryMap<Dom, Cod>& F,
                                                   const CellPartition<Cod>& partition,
                                                   const PointConfiguration<point_t<Dom>>& config) {
  PointConfiguration<point_t<Dom>> out;
  out.seed = config.seed;
  out.intensity = config.intensity;
  for (const auto& x : config.points) {
    if (const auto c = partition.locate(F(x))) out.push(x, *c);
  }
  return out;
}

// The coupled induced configuration: cell i of the codomain receives exactly
// as many points as E_i holds, placed uniformly in K_i from the cell's own
// transport stream.
template <MetricMeasureSpace Cod, class PD>
PointConfiguration<point_t<Cod>> transport_configuration(const InducedMeasureTable<Cod>& table,
                                                         const PointConfiguration<PD>& domain_config,
                                                         std::uint64_t seed) {
  const auto& part = table.partition;
  const auto counts = domain_config.cell_counts(part.size());
  PointConfiguration<point_t<Cod>> out;
  out.seed = seed;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    Stream stream = make_stream(seed, 0, i, Purpose::Transport);
    for (std::size_t k = 0; k < counts[i]; ++k) {
      out.push(sample_uniform_in_cell(part, i, stream), i);
    }
  }
  return out;
}

enum class TransportDirection { ForwardSupercritical, ForwardSubcritical };

inline std::string to_string(TransportDirection d) {
  return d == TransportDirection::ForwardSupercritical ? "supercritical" : "subcritical";
}

struct TransportOptions {
  // Offset the radii by 2 gamma (the cell diameter) instead of gamma.
  bool double_gamma = false;
};

//! Transported radius for a domain radius R.
inline double transported_radius(const QiParams& p, double R, TransportDirection direction,
                                 const TransportOptions& opts = {}) {
  const double g = opts.double_gamma ? 2.0 * p.gamma : p.gamma;
  if (direction == TransportDirection::ForwardSupercritical) {
    return radius_forward(R, p.alpha, p.beta) + g;
  }
  return radius_backward(R, p.alpha, p.beta, g) - g;
}

template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
BooleanModel<Cod> transport_model(const QuasiIsometryMap<Dom, Cod>& F,
                                  const InducedMeasureTable<Cod>& table,
                                  const BooleanModel<Dom>& model, TransportDirection direction,
                                  std::uint64_t seed, const TransportOptions& opts = {}) {
  const double radius = transported_radius(F.params, model.radius, direction, opts);
  const auto indexed = index_by_preimage(F, table.partition, model.config);
  return {table.partition.space(), transport_configuration(table, indexed, seed), radius};
}

}  // namespace percolab

#endif  // PERCOLAB_QUASI_ISOMETRY_HPP_
