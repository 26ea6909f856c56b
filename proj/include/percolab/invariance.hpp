#ifndef PERCOLAB_INVARIANCE_HPP_
#define PERCOLAB_INVARIANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percolab/phase.hpp"
#include "percolab/quasi_isometry.hpp"

namespace percolab {

struct InvarianceOptions {
  double L_small = 20.0;
  double L_large = 40.0;
  // Codomain window radii; default to the domain ones.
  std::optional<double> codomain_L_small;
  std::optional<double> codomain_L_large;
  std::size_t trials = 200;
  PhaseOptions phase{};
  InduceOptions induce{};
  TransportOptions transport{};
};

struct LegReport {
  TransportDirection direction = TransportDirection::ForwardSupercritical;
  double radius = 0.0;
  PhaseVerdict at_low;   // codomain at lambda_low
  PhaseVerdict at_high;  // codomain at lambda_high
  // Supercritical leg reads the dominated end (lambda_low), subcritical the
  // dominating end (lambda_high).
  Verdict verdict = Verdict::Undetermined;
};

template <MetricMeasureSpace Cod>
struct InvarianceReport {
  std::string map_name;
  QiParams params;
  double lambda = 0.0;
  double R = 0.0;
  std::uint64_t seed = 0;
  PhaseVerdict domain;
  InducedMeasureTable<Cod> table;
  MmConstants mm;
  double lambda_low = 0.0;   // lambda * Cbar1
  double lambda_high = 0.0;  // lambda * Cbar2
  LegReport supercritical;
  LegReport subcritical;
  Verdict codomain_verdict = Verdict::Undetermined;
  bool agree = false;
  bool opposite_verdicts = false;
  // One coupled transport of a domain realization, as a sanity record.
  std::size_t coupled_domain_points = 0;
  std::size_t coupled_codomain_points = 0;
  bool coupled_counts_match = false;
};

// (1) domain phase, (2) induced partition, mu* table and homogenized
// intensity bracket, (3) codomain phase on both transport legs at both
// bracket ends, (4) agreement report.
template <MetricMeasureSpace Dom, MetricMeasureSpace Cod>
InvarianceReport<Cod> invariance_experiment(const QuasiIsometryMap<Dom, Cod>& F, double lambda,
                                            double R, std::uint64_t seed,
                                            const InvarianceOptions& opts = {}) {
  validate_params(F.params);
  require(lambda > 0.0, "intensity must be positive");
  // Both radii first, so a violated backward bound fails before any sampling.
  const double r_sup =
      transported_radius(F.params, R, TransportDirection::ForwardSupercritical, opts.transport);
  const double r_sub =
      transported_radius(F.params, R, TransportDirection::ForwardSubcritical, opts.transport);

  const std::uint64_t partition_seed = derive_seed(seed, 0, 0, Purpose::Partition);
  auto partition = induce_partition(F, partition_seed, opts.induce);
  auto table = induce_measure_table(F, std::move(partition), partition_seed, opts.induce);
  const auto mm = mm_check(table);

  InvarianceReport<Cod> rep{F.name, F.params, lambda, R, seed, {}, std::move(table), mm};
  rep.domain = classify_phase(F.domain, lambda, R, opts.L_small, opts.L_large, opts.trials, seed,
                              opts.phase);
  if (!mm.compatible) {
    fail(ErrorCode::InvalidArgument, "map is not measure compatible: " + mm.violation);
  }
  rep.lambda_low = lambda * mm.Cbar1;
  rep.lambda_high = lambda * mm.Cbar2;

  const double Ls = opts.codomain_L_small.value_or(opts.L_small);
  const double Ll = opts.codomain_L_large.value_or(opts.L_large);
  const std::uint64_t cod_seed = derive_seed(seed, 1, 0, Purpose::Sampling);
  auto leg = [&](TransportDirection dir, double radius) {
    LegReport out;
    out.direction = dir;
    out.radius = radius;
    out.at_low = classify_phase(F.codomain, rep.lambda_low, radius, Ls, Ll, opts.trials,
                                cod_seed, opts.phase);
    out.at_high = classify_phase(F.codomain, rep.lambda_high, radius, Ls, Ll, opts.trials,
                                 cod_seed, opts.phase);
    out.verdict = dir == TransportDirection::ForwardSupercritical ? out.at_low.verdict
                                                                   : out.at_high.verdict;
    return out;
  };
  rep.supercritical = leg(TransportDirection::ForwardSupercritical, r_sup);
  rep.subcritical = leg(TransportDirection::ForwardSubcritical, r_sub);

  if (rep.domain.verdict == Verdict::Supercritical) {
    rep.codomain_verdict = rep.supercritical.verdict;
  } else if (rep.domain.verdict == Verdict::Subcritical) {
    rep.codomain_verdict = rep.subcritical.verdict;
  }
  rep.agree = rep.domain.verdict == rep.codomain_verdict;
  rep.opposite_verdicts = opposite(rep.domain.verdict, rep.codomain_verdict);

  // Coupled record: domain realization (window of the map) re-indexed by
  // preimage cell and transported cell by cell.
  CrossingExplorer<Dom> explorer(F.domain, F.domain.window().padding, opts.phase.geometry,
                                 opts.phase.tile);
  const auto domain_config = explorer.materialize(lambda, seed, 0);
  const auto indexed = index_by_preimage(F, rep.table.partition, domain_config);
  const auto moved =
      transport_configuration(rep.table, indexed, derive_seed(seed, 0, 0, Purpose::Transport));
  rep.coupled_domain_points = indexed.size();
  rep.coupled_codomain_points = moved.size();
  rep.coupled_counts_match =
      indexed.cell_counts(rep.table.partition.size()) == moved.cell_counts(rep.table.partition.size());
  return rep;
}

}  // namespace percolab

#endif  // PERCOLAB_INVARIANCE_HPP_
