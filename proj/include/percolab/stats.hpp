#ifndef PERCOLAB_STATS_HPP_
#define PERCOLAB_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "percolab/error.hpp"

namespace percolab {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

//! Wilson score interval for a binomial proportion (z = 1.96 by default).
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  require(trials > 0, "Wilson interval needs at least one trial");
  require(successes <= trials, "more successes than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double mid = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The closed form leaves rounding noise at the boundary counts.
  const double low = successes == 0 ? 0.0 : std::max(0.0, mid - half);
  const double high = successes == trials ? 1.0 : std::min(1.0, mid + half);
  return {low, high};
}

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;

  bool rejects(double significance) const noexcept { return p_value < significance; }
};

namespace stats_detail {

inline double upper_tail(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace stats_detail

//! Pearson test on an r x c table of counts. Rows or columns that are all
//! zero carry no information and are dropped.
inline ChiSquareResult chi_square_table(const std::vector<std::vector<double>>& table) {
  require(!table.empty() && !table.front().empty(), "empty contingency table");
  const std::size_t cols = table.front().size();
  std::vector<double> row_sum, col_sum(cols, 0.0);
  double total = 0.0;
  for (const auto& row : table) {
    require(row.size() == cols, "ragged contingency table");
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      s += row[j];
      col_sum[j] += row[j];
    }
    row_sum.push_back(s);
    total += s;
  }
  require(total > 0.0, "contingency table has no counts");
  double stat = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (row_sum[i] == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_sum[j] == 0.0) continue;
      const double expected = row_sum[i] * col_sum[j] / total;
      const double d = table[i][j] - expected;
      stat += d * d / expected;
    }
  }
  const auto nonzero = [](const std::vector<double>& v) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [](double x) { return x > 0.0; }));
  };
  const double dof = (nonzero(row_sum) - 1.0) * (nonzero(col_sum) - 1.0);
  return {stat, dof, stats_detail::upper_tail(stat, dof)};
}

// Histogram bins over integer samples: consecutive values are merged until
// every bin's pooled count reaches `min_count`, so expected frequencies stay
// large enough for the chi-square approximation.
inline std::vector<std::pair<long long, long long>> pooled_bins(
    const std::vector<std::vector<long long>>& samples, double min_count = 5.0) {
  std::map<long long, double> pooled;
  for (const auto& s : samples) {
    for (const auto v : s) pooled[v] += 1.0;
  }
  std::vector<std::pair<long long, long long>> bins;  // [lo, hi]
  double acc = 0.0;
  long long lo = 0;
  bool open = false;
  for (const auto& [value, count] : pooled) {
    if (!open) {
      lo = value;
      open = true;
    }
    acc += count;
    if (acc >= min_count) {
      bins.emplace_back(lo, value);
      acc = 0.0;
      open = false;
    }
  }
  if (open) {
    if (bins.empty()) {
      bins.emplace_back(lo, pooled.rbegin()->first);
    } else {
      bins.back().second = pooled.rbegin()->first;
    }
  }
  return bins;
}

//! Two-or-more sample homogeneity test of integer-valued samples.
inline ChiSquareResult chi_square_homogeneity(const std::vector<std::vector<long long>>& samples,
                                              double min_count = 5.0) {
  require(samples.size() >= 2, "homogeneity test needs two samples");
  const auto bins = pooled_bins(samples, min_count * static_cast<double>(samples.size()));
  std::vector<std::vector<double>> table;
  for (const auto& s : samples) {
    std::vector<double> row(bins.size(), 0.0);
    for (const auto v : s) {
      const auto it = std::lower_bound(bins.begin(), bins.end(), v,
                                       [](const auto& b, long long x) { return b.second < x; });
      row[static_cast<std::size_t>(it - bins.begin())] += 1.0;
    }
    table.push_back(std::move(row));
  }
  return chi_square_table(table);
}

//! Independence test of paired integer samples (x_k, y_k).
inline ChiSquareResult chi_square_independence(const std::vector<long long>& x,
                                               const std::vector<long long>& y,
                                               double min_count = 5.0) {
  require(x.size() == y.size() && !x.empty(), "independence test needs paired samples");
  // Marginal bins sized so that a typical table cell keeps min_count entries.
  const double n = static_cast<double>(x.size());
  const double per_margin = std::max(min_count, std::sqrt(min_count * n));
  const auto bx = pooled_bins({x}, per_margin);
  const auto by = pooled_bins({y}, per_margin);
  auto bin_of = [](const auto& bins, long long v) {
    const auto it = std::lower_bound(bins.begin(), bins.end(), v,
                                     [](const auto& b, long long t) { return b.second < t; });
    return static_cast<std::size_t>(it - bins.begin());
  };
  std::vector<std::vector<double>> table(bx.size(), std::vector<double>(by.size(), 0.0));
  for (std::size_t k = 0; k < x.size(); ++k) table[bin_of(bx, x[k])][bin_of(by, y[k])] += 1.0;
  return chi_square_table(table);
}

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t n = 0;

  double standard_error() const { return n > 0 ? std::sqrt(variance / static_cast<double>(n)) : 0.0; }
};

template <class T>
MeanVar mean_var(const std::vector<T>& xs) {
  MeanVar m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double s = 0.0;
  for (const auto x : xs) s += static_cast<double>(x);
  m.mean = s / static_cast<double>(m.n);
  double q = 0.0;
  for (const auto x : xs) {
    const double d = static_cast<double>(x) - m.mean;
    q += d * d;
  }
  m.variance = m.n > 1 ? q / static_cast<double>(m.n - 1) : 0.0;
  return m;
}

}  // namespace percolab

#endif  // PERCOLAB_STATS_HPP_
