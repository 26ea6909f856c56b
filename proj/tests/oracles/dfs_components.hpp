#ifndef PERCOLAB_TESTS_DFS_COMPONENTS_HPP_
#define PERCOLAB_TESTS_DFS_COMPONENTS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

// Brute-force labelling: O(n^2) adjacency by a caller-supplied predicate, then
// an explicit-stack DFS. Labels are numbered in order of each component's
// lowest-index point.
inline std::vector<std::size_t> dfs_labels(std::size_t n,
                                           const std::function<bool(std::size_t, std::size_t)>& touch) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (touch(u, v)) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
  }
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, kUnset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto v : adj[u]) {
        if (label[v] == kUnset) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace oracle

#endif  // PERCOLAB_TESTS_DFS_COMPONENTS_HPP_
