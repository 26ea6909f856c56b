#ifndef PERCOLAB_PHASE_HPP_
#define PERCOLAB_PHASE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "percolab/boolean_model.hpp"
#include "percolab/explore.hpp"
#include "percolab/stats.hpp"

namespace percolab {

struct PhaseRow {
  double lambda = 0.0;
  double R = 0.0;
  double L = 0.0;
  std::size_t trials = 0;
  std::size_t crossings = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t seed = 0;
};

inline PhaseRow make_row(double lambda, double R, double L, std::size_t trials,
                         std::size_t crossings, std::uint64_t seed) {
  const auto ci = wilson_interval(crossings, trials);
  return {lambda, R, L, trials, crossings,
          static_cast<double>(crossings) / static_cast<double>(trials), ci.low, ci.high, seed};
}

struct PhaseCurve {
  std::vector<PhaseRow> rows;
  std::uint64_t seed = 0;

  //! p_hat nondecreasing in lambda within each (R, L) series.
  bool monotone() const {
    auto sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [](const PhaseRow& a, const PhaseRow& b) {
      if (a.R != b.R) return a.R < b.R;
      if (a.L != b.L) return a.L < b.L;
      return a.lambda < b.lambda;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const auto& a = sorted[i - 1];
      const auto& b = sorted[i];
      if (a.R == b.R && a.L == b.L && b.p_hat < a.p_hat) return false;
    }
    return true;
  }
};

struct PhaseOptions {
  unsigned threads = 1;
  CrossingGeometry geometry{};
  double tile = 1.0;  // Euclidean tile side / hyperbolic band width
};

//! Per-trial crossing outcomes. Trial t always uses the streams of
//! (seed, t), whatever the thread count.
template <MetricMeasureSpace S>
std::vector<char> crossing_trials(const S& space, double lambda, double R, std::size_t trials,
                                  std::uint64_t seed, const PhaseOptions& opts = {}) {
  std::vector<char> hit(trials, 0);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  auto work = [&](unsigned w) {
    CrossingExplorer<S> explorer(space, R, opts.geometry, opts.tile);
    for (std::size_t t = w; t < trials; t += workers) {
      hit[t] = explorer.crosses(lambda, seed, t) ? 1 : 0;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return hit;
}

template <MetricMeasureSpace S>
PhaseRow percolation_probability(const S& space, double lambda, double R, std::size_t trials,
                                 std::uint64_t seed, const PhaseOptions& opts = {}) {
  require(trials >= 1, "need at least one trial");
  const auto hit = crossing_trials(space, lambda, R, trials, seed, opts);
  std::size_t crossings = 0;
  for (const auto h : hit) crossings += static_cast<std::size_t>(h);
  return make_row(lambda, R, space.window().radius, trials, crossings, seed);
}

//! Coupled sweep: every grid point reuses the same trial streams.
template <MetricMeasureSpace S>
PhaseCurve sweep(const S& space, const std::vector<double>& lambdas, double R, std::size_t trials,
                 std::uint64_t seed, const PhaseOptions& opts = {}) {
  PhaseCurve curve;
  curve.seed = seed;
  for (const double lambda : lambdas) {
    curve.rows.push_back(percolation_probability(space, lambda, R, trials, seed, opts));
  }
  return curve;
}

//! The same space with window radius L and padding R (center kept).
template <MetricMeasureSpace S>
S resize_window(const S& space, double L, double padding) {
  auto w = space.window();
  w.radius = L;
  w.padding = padding;
  return space.with_window(w);
}

using RowEvaluator = std::function<PhaseRow(double lambda)>;

struct BisectionConfig {
  double low = 0.0;
  double high = 1.0;
  double tolerance = 1e-3;
  int max_iterations = 60;
  bool stop_on_ci = true;  // stop once a midpoint's CI contains 0.5
};

struct LambdaCEstimate {
  double lambda_c = 0.0;
  double low = 0.0;
  double high = 0.0;
  int iterations = 0;
  std::vector<PhaseRow> rows;  // every evaluation, in order
};

//! Bisection on lambda for the p_hat = 0.5 crossing.
inline LambdaCEstimate estimate_lambda_c(const RowEvaluator& evaluate, const BisectionConfig& cfg) {
  require(cfg.low < cfg.high, "bisection bracket must satisfy low < high");
  require(cfg.tolerance > 0.0, "bisection tolerance must be positive");
  LambdaCEstimate est;
  const auto lo_row = evaluate(cfg.low);
  const auto hi_row = evaluate(cfg.high);
  est.rows = {lo_row, hi_row};
  if (!(lo_row.p_hat < 0.5 && hi_row.p_hat > 0.5)) {
    fail(ErrorCode::BracketNotStraddling,
         "bracket does not straddle threshold: p_hat(" + std::to_string(cfg.low) + ") = " +
             std::to_string(lo_row.p_hat) + ", p_hat(" + std::to_string(cfg.high) +
             ") = " + std::to_string(hi_row.p_hat));
  }
  est.low = cfg.low;
  est.high = cfg.high;
  while (est.high - est.low >= cfg.tolerance && est.iterations < cfg.max_iterations) {
    const double mid = 0.5 * (est.low + est.high);
    const auto row = evaluate(mid);
    est.rows.push_back(row);
    ++est.iterations;
    if (cfg.stop_on_ci && row.ci_low <= 0.5 && 0.5 <= row.ci_high) {
      est.lambda_c = mid;
      return est;
    }
    if (row.p_hat < 0.5) {
      est.low = mid;
    } else {
      est.high = mid;
    }
  }
  est.lambda_c = 0.5 * (est.low + est.high);
  return est;
}

template <MetricMeasureSpace S>
LambdaCEstimate estimate_lambda_c(const S& space, double R, std::size_t trials, std::uint64_t seed,
                                  const BisectionConfig& cfg, const PhaseOptions& opts = {}) {
  return estimate_lambda_c(
      [&](double lambda) { return percolation_probability(space, lambda, R, trials, seed, opts); },
      cfg);
}

enum class Verdict { Subcritical, Supercritical, Undetermined };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Subcritical: return "subcritical";
    case Verdict::Supercritical: return "supercritical";
    case Verdict::Undetermined: return "undetermined";
  }
  return "unknown";
}

inline bool opposite(Verdict a, Verdict b) {
  return (a == Verdict::Subcritical && b == Verdict::Supercritical) ||
         (a == Verdict::Supercritical && b == Verdict::Subcritical);
}

struct PhaseVerdict {
  Verdict verdict = Verdict::Undetermined;
  PhaseRow small;
  PhaseRow large;
};

inline constexpr double kSubcriticalBelow = 0.05;
inline constexpr double kSupercriticalAbove = 0.95;

inline PhaseVerdict classify_rows(const PhaseRow& small, const PhaseRow& large) {
  PhaseVerdict v{Verdict::Undetermined, small, large};
  if (large.p_hat < kSubcriticalBelow && large.p_hat <= small.p_hat) {
    v.verdict = Verdict::Subcritical;
  } else if (large.p_hat > kSupercriticalAbove && large.p_hat >= small.p_hat) {
    v.verdict = Verdict::Supercritical;
  }
  return v;
}

template <MetricMeasureSpace S>
PhaseVerdict classify_phase(const S& space, double lambda, double R, double L_small,
                            double L_large, std::size_t trials, std::uint64_t seed,
                            const PhaseOptions& opts = {}) {
  require(L_small < L_large, "classify_phase needs L_small < L_large");
  const auto small =
      percolation_probability(resize_window(space, L_small, R), lambda, R, trials, seed, opts);
  const auto large =
      percolation_probability(resize_window(space, L_large, R), lambda, R, trials, seed, opts);
  return classify_rows(small, large);
}

}  // namespace percolab

#endif  // PERCOLAB_PHASE_HPP_
