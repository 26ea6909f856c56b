#ifndef PERCOLAB_GROUP_HPP_
#define PERCOLAB_GROUP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "percolab/error.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Canonical form of a group element:
//   FreeAbelian(d): integer coordinate vector of length d,
//   FreeGroup(k):   freely reduced word, letter +-(i+1) for generator i,
//   Heisenberg:     integer triple (a, b, c), product
//                   (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
using GroupElement = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL ^ g.size();
    for (const auto v : g) {
      h = mix64(h ^ static_cast<std::uint64_t>(v));
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::string to_string(const GroupElement& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(g[i]);
  }
  return out;
}

enum class GroupKind { FreeAbelian, FreeGroup, Heisenberg };

class GroupSpec {
 public:
  GroupSpec(GroupKind kind, int rank, std::vector<GroupElement> generators,
            std::string name = {})
      : kind_(kind),
        rank_(rank),
        generators_(std::move(generators)),
        name_(std::move(name)) {
    validate();
  }

  //! Z^d with the standard symmetric generators +-e_i.
  static GroupSpec free_abelian(int d) {
    require(d >= 1, "free abelian rank must be at least 1");
    std::vector<GroupElement> gens;
    for (int i = 0; i < d; ++i) {
      GroupElement e(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(i)] = 1;
      gens.push_back(e);
      e[static_cast<std::size_t>(i)] = -1;
      gens.push_back(e);
    }
    return GroupSpec(GroupKind::FreeAbelian, d, std::move(gens),
                     "Z" + (d == 1 ? std::string{} : "^" + std::to_string(d)));
  }

  //! Z^2 with king moves {(+-1,0),(0,+-1),(+-1,+-1)}; word metric = Chebyshev.
  static GroupSpec z2_king() {
    std::vector<GroupElement> gens;
    for (std::int64_t a = -1; a <= 1; ++a) {
      for (std::int64_t b = -1; b <= 1; ++b) {
        if (a != 0 || b != 0) gens.push_back({a, b});
      }
    }
    return GroupSpec(GroupKind::FreeAbelian, 2, std::move(gens), "Z^2-king");
  }

  static GroupSpec free_group(int k) {
    require(k >= 1, "free group rank must be at least 1");
    std::vector<GroupElement> gens;
    for (std::int64_t i = 1; i <= k; ++i) {
      gens.push_back({i});
      gens.push_back({-i});
    }
    return GroupSpec(GroupKind::FreeGroup, k, std::move(gens),
                     "F" + std::to_string(k));
  }

  //! Discrete Heisenberg group with generators x^{+-1}, y^{+-1}.
  static GroupSpec heisenberg() {
    return GroupSpec(GroupKind::Heisenberg, 3,
                     {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}},
                     "Heisenberg");
  }

  GroupKind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }
  const std::vector<GroupElement>& generators() const noexcept {
    return generators_;
  }
  const std::string& name() const noexcept { return name_; }

  GroupElement identity() const {
    switch (kind_) {
      case GroupKind::FreeAbelian:
        return GroupElement(static_cast<std::size_t>(rank_), 0);
      case GroupKind::FreeGroup:
        return {};
      case GroupKind::Heisenberg:
        return {0, 0, 0};
    }
    return {};
  }

  bool is_element(const GroupElement& g) const {
    switch (kind_) {
      case GroupKind::FreeAbelian:
        return g.size() == static_cast<std::size_t>(rank_);
      case GroupKind::Heisenberg:
        return g.size() == 3;
      case GroupKind::FreeGroup:
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (g[i] == 0 || std::abs(g[i]) > rank_) return false;
          if (i > 0 && g[i] == -g[i - 1]) return false;
        }
        return true;
    }
    return false;
  }

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const {
    switch (kind_) {
      case GroupKind::FreeAbelian: {
        GroupElement out(a);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
        return out;
      }
      case GroupKind::Heisenberg:
        return {a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]};
      case GroupKind::FreeGroup: {
        GroupElement out(a);
        std::size_t j = 0;
        while (j < b.size() && !out.empty() && out.back() == -b[j]) {
          out.pop_back();
          ++j;
        }
        out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
        return out;
      }
    }
    return {};
  }

  GroupElement inverse(const GroupElement& a) const {
    switch (kind_) {
      case GroupKind::FreeAbelian: {
        GroupElement out(a);
        for (auto& v : out) v = -v;
        return out;
      }
      case GroupKind::Heisenberg:
        return {-a[0], -a[1], a[0] * a[1] - a[2]};
      case GroupKind::FreeGroup: {
        GroupElement out(a.rbegin(), a.rend());
        for (auto& v : out) v = -v;
        return out;
      }
    }
    return {};
  }

 private:
  void validate() const {
    require(rank_ >= 1, "group rank must be positive");
    require(!generators_.empty(), "generating set must be non-empty");
    const std::unordered_set<GroupElement, ElementHash> set(generators_.begin(),
                                                            generators_.end());
    require(set.size() == generators_.size(), "generating set has duplicates");
    const GroupElement e = identity();
    for (const auto& s : generators_) {
      require(is_element(s), "generator is not a canonical group element");
      require(s != e, "identity may not be a generator");
      require(set.count(inverse(s)) == 1, "generating set is not symmetric");
    }
  }

  GroupKind kind_;
  int rank_;
  std::vector<GroupElement> generators_;
  std::string name_;
};

inline constexpr std::size_t kDefaultBallLimit = 20'000'000;

// Word-metric ball about the identity, listed in breadth-first order.
struct CayleyBall {
  std::vector<GroupElement> elements;
  std::vector<int> lengths;            // word length of each element
  std::vector<std::size_t> sizes;      // sizes[n] = |B(n)|

  int radius() const noexcept { return static_cast<int>(sizes.size()) - 1; }
};

inline CayleyBall cayley_ball(const GroupSpec& group, int n,
                              std::size_t size_limit = kDefaultBallLimit) {
  require(n >= 0, "ball radius must be non-negative");
  CayleyBall ball;
  std::unordered_set<GroupElement, ElementHash> seen;
  ball.elements.push_back(group.identity());
  ball.lengths.push_back(0);
  ball.sizes.push_back(1);
  seen.insert(ball.elements.front());
  std::size_t layer_begin = 0;
  for (int k = 1; k <= n; ++k) {
    const std::size_t layer_end = ball.elements.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& s : group.generators()) {
        GroupElement h = group.multiply(ball.elements[i], s);
        if (seen.insert(h).second) {
          ball.elements.push_back(std::move(h));
          ball.lengths.push_back(k);
          if (ball.elements.size() > size_limit) {
            fail(ErrorCode::BallTooLarge,
                 "ball too large: more than " + std::to_string(size_limit) +
                     " elements at radius " + std::to_string(k));
          }
        }
      }
    }
    layer_begin = layer_end;
    ball.sizes.push_back(ball.elements.size());
  }
  return ball;
}

//! d_S(g, h) = |g^{-1} h|_S by breadth-first search from the identity.
inline int word_distance(const GroupSpec& group, const GroupElement& g,
                         const GroupElement& h, int bound = 256) {
  require(group.is_element(g) && group.is_element(h),
          "element not representable in " + group.name());
  const GroupElement target = group.multiply(group.inverse(g), h);
  const GroupElement e = group.identity();
  if (target == e) return 0;
  std::unordered_set<GroupElement, ElementHash> seen{e};
  std::vector<GroupElement> frontier{e};
  for (int k = 1; k <= bound; ++k) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& s : group.generators()) {
        GroupElement y = group.multiply(x, s);
        if (y == target) return k;
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  fail(ErrorCode::RadiusExceeded,
       "radius exceeded: no word of length <= " + std::to_string(bound));
}

struct GrowthEstimate {
  std::vector<std::pair<int, std::size_t>> ball_sizes;  // (n, |B(n)|)
  double fitted_degree = 0.0;
};

// Least-squares slope of log|B(n)| against log n over n in [n_max/2, n_max].
inline GrowthEstimate growth_degree(const GroupSpec& group, int n_max,
                                    std::size_t size_limit = kDefaultBallLimit) {
  require(n_max >= 4, "growth fit needs n_max >= 4");
  const CayleyBall ball = cayley_ball(group, n_max, size_limit);
  GrowthEstimate est;
  for (int n = 0; n <= n_max; ++n) {
    est.ball_sizes.emplace_back(n, ball.sizes[static_cast<std::size_t>(n)]);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = n_max / 2; n <= n_max; ++n) {
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(static_cast<double>(ball.sizes[static_cast<std::size_t>(n)]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  est.fitted_degree = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return est;
}

}  // namespace percolab

#endif  // PERCOLAB_GROUP_HPP_
