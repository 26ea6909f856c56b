#ifndef PERCOLAB_TESTS_Z2_SITE_HPP_
#define PERCOLAB_TESTS_Z2_SITE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

namespace oracle {

// Site percolation on the L1 diamond |x| + |y| <= L of Z^2, core |x|+|y| <=
// core_fraction * L, shell |x|+|y| = L. Newman-Ziff: occupy sites in a
// uniformly random order and record, per trial, the first occupation count at
// which a core site and a shell site share a cluster.
class Z2SiteSweep {
 public:
  Z2SiteSweep(int L, double core_fraction) : L_(L) {
    for (int x = -L; x <= L; ++x) {
      for (int y = -L; y <= L; ++y) {
        if (std::abs(x) + std::abs(y) <= L) sites_.emplace_back(x, y);
      }
    }
    index_.assign(static_cast<std::size_t>(2 * L + 1) * (2 * L + 1), -1);
    for (std::size_t i = 0; i < sites_.size(); ++i) index_[slot(sites_[i].first, sites_[i].second)] = static_cast<int>(i);
    core_ = core_fraction * L;
  }

  std::size_t sites() const noexcept { return sites_.size(); }

  std::vector<std::size_t> thresholds(std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> out;
    out.reserve(trials);
    std::vector<std::size_t> order(sites_.size());
    for (std::size_t t = 0; t < trials; ++t) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      out.push_back(run(order));
    }
    return out;
  }

  // Canonical crossing probability at occupation p from the per-trial counts.
  double crossing_probability(const std::vector<std::size_t>& ks, double p) const {
    const boost::math::binomial_distribution<double> dist(static_cast<double>(sites_.size()), p);
    double total = 0.0;
    for (const auto k : ks) total += k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
    return total / static_cast<double>(ks.size());
  }

  double half_point(const std::vector<std::size_t>& ks) const {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (crossing_probability(ks, mid) < 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  std::size_t slot(int x, int y) const {
    return static_cast<std::size_t>(x + L_) * (2 * L_ + 1) + static_cast<std::size_t>(y + L_);
  }

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[a] = b;
  }

  std::size_t run(const std::vector<std::size_t>& order) {
    const std::size_t n = sites_.size();
    const std::size_t core = n, shell = n + 1;
    parent_.resize(n + 2);
    std::iota(parent_.begin(), parent_.end(), 0);
    std::vector<char> open(n, 0);
    static constexpr int dx[] = {1, -1, 0, 0};
    static constexpr int dy[] = {0, 0, 1, -1};
    for (std::size_t k = 0; k < n; ++k) {
      const auto s = order[k];
      open[s] = 1;
      const auto [x, y] = sites_[s];
      const int r = std::abs(x) + std::abs(y);
      if (r <= core_) unite(s, core);
      if (r == L_) unite(s, shell);
      for (int d = 0; d < 4; ++d) {
        const int nx = x + dx[d], ny = y + dy[d];
        if (std::abs(nx) + std::abs(ny) > L_) continue;
        const int j = index_[slot(nx, ny)];
        if (open[j]) unite(s, static_cast<std::size_t>(j));
      }
      if (find(core) == find(shell)) return k + 1;
    }
    return n + 1;
  }

  int L_;
  double core_ = 0.0;
  std::vector<std::pair<int, int>> sites_;
  std::vector<int> index_;
  std::vector<std::size_t> parent_;
};

}  // namespace oracle

#endif  // PERCOLAB_TESTS_Z2_SITE_HPP_
