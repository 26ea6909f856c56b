#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/dfs_components.hpp"
#include "percolab/percolab.hpp"

using namespace percolab;

namespace {

template <class S>
BooleanModel<S> model_of(const S& space, const std::vector<point_t<S>>& pts, double R) {
  PointConfiguration<point_t<S>> cfg;
  for (const auto& p : pts) cfg.push(p, 0);
  return {space, cfg, R};
}

template <class S>
void expect_matches_dfs(const BooleanModel<S>& m) {
  const auto report = clusters(intersection_graph(m));
  const auto& pts = m.config.points;
  const auto oracle = oracle::dfs_labels(pts.size(), [&](std::size_t u, std::size_t v) {
    return m.space.distance(pts[u], pts[v]) <= 2.0 * m.radius;
  });
  ASSERT_EQ(report.labels.size(), oracle.size());
  EXPECT_EQ(report.labels, oracle);
}

const EuclideanPlane kPlane({{0.0, 0.0}, 10.0, 2.0});

}  // namespace

TEST(IntersectionGraph, ClosedBallsTouchAtTwiceR) {
  EXPECT_EQ(intersection_graph(model_of(kPlane, {{0, 0}, {1.9, 0}}, 1.0)).edge_count(), 1u);
  EXPECT_EQ(intersection_graph(model_of(kPlane, {{0, 0}, {2.0, 0}}, 1.0)).edge_count(), 1u);
  EXPECT_EQ(intersection_graph(model_of(kPlane, {{0, 0}, {2.1, 0}}, 1.0)).edge_count(), 0u);
}

TEST(IntersectionGraph, CollinearChain) {
  const auto m = model_of(kPlane, {{0, 0}, {1.5, 0}, {3.0, 0}, {4.5, 0}}, 1.0);
  const auto adj = intersection_graph(m);
  EXPECT_EQ(adj.edge_count(), 3u);
  const auto rep = clusters(adj);
  ASSERT_EQ(rep.component_count(), 1u);
  EXPECT_EQ(rep.sizes[0], 4u);
  EXPECT_NEAR(max_extent(m, rep), 4.5 + 2.0, 1e-12);
}

TEST(IntersectionGraph, CompleteGraphInTinyDisk) {
  const auto m = model_of(kPlane, {{0, 0}, {0.1, 0}, {0, 0.1}, {-0.1, 0}, {0, -0.1}}, 1.0);
  EXPECT_EQ(intersection_graph(m).edge_count(), 10u);
}

TEST(IntersectionGraph, ZeroRadiusOnlyCoincidentCentersTouch) {
  const auto m = model_of(kPlane, {{1, 1}, {1, 1}, {1, 1.001}}, 0.0);
  const auto rep = clusters(intersection_graph(m));
  EXPECT_EQ(rep.component_count(), 2u);
  EXPECT_EQ(rep.labels[0], rep.labels[1]);
}

TEST(IntersectionGraph, NegativeRadiusRejected) {
  EXPECT_THROW(intersection_graph(model_of(kPlane, {{0, 0}}, -1.0)), Error);
}

TEST(Clusters, EmptyConfiguration) {
  const auto m = model_of(kPlane, {}, 1.0);
  const auto rep = analyze(m);
  EXPECT_EQ(rep.component_count(), 0u);
  EXPECT_DOUBLE_EQ(rep.max_extent, 0.0);
  EXPECT_FALSE(rep.crossing);
}

TEST(Clusters, EuclideanMatchesDfs) {
  const EuclideanPlane space({{0, 0}, 8, 0.6});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CrossingExplorer<EuclideanPlane> ex(space, 0.6);
    expect_matches_dfs(BooleanModel<EuclideanPlane>{space, ex.materialize(1.0, seed, 0), 0.6});
  }
}

TEST(Clusters, HyperbolicMatchesDfs) {
  const HyperbolicDisk space({{0, 0}, 3, 0.5});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CrossingExplorer<HyperbolicDisk> ex(space, 0.5);
    const auto cfg = ex.materialize(1.0, seed, 0);
    ASSERT_GT(cfg.size(), 10u);
    expect_matches_dfs(BooleanModel<HyperbolicDisk>{space, cfg, 0.5});
  }
}

TEST(Clusters, LatticeMatchesDfs) {
  const CayleyGraph g(GroupSpec::free_abelian(2), {{0, 0}, 12, 1});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto cfg = sample_bernoulli(g, [](const GroupElement&) { return 0.55; }, seed);
    expect_matches_dfs(BooleanModel<CayleyGraph>{g, cfg, 0.5});
  }
}

TEST(Clusters, NetGraphMatchesDfs) {
  const EuclideanPlane ambient({{0, 0}, 6, 0});
  const auto net = net_graph(epsilon_net(ambient, 1.0, 5));
  const auto cfg = sample_bernoulli(net, [](const NetVertex&) { return 0.6; }, 3);
  expect_matches_dfs(BooleanModel<NetGraph>{net, cfg, 0.5});
}

TEST(Clusters, LabelsNumberedByFirstPoint) {
  const auto m = model_of(kPlane, {{5, 5}, {-5, -5}, {5, 5.5}, {-5, -5.5}, {0, 0}}, 0.5);
  const auto rep = clusters(intersection_graph(m));
  EXPECT_EQ(rep.labels, (std::vector<std::size_t>{0, 1, 0, 1, 2}));
  EXPECT_EQ(rep.sizes, (std::vector<std::size_t>{2, 2, 1}));
}

TEST(Crossing, DenseGridCrosses) {
  const EuclideanPlane space({{0, 0}, 10, 0.5});
  std::vector<Vec2> pts;
  for (double x = -10; x <= 10; x += 0.5) {
    for (double y = -10; y <= 10; y += 0.5) {
      if (std::hypot(x, y) <= 10.0) pts.push_back({x, y});
    }
  }
  EXPECT_TRUE(analyze(model_of(space, pts, 0.5)).crossing);
}

TEST(Crossing, DisconnectedCoreAndShell) {
  const EuclideanPlane space({{0, 0}, 10, 1});
  EXPECT_FALSE(analyze(model_of(space, {{0, 0}, {9.5, 0}}, 1.0)).crossing);
}

TEST(Crossing, RadiusAtLeastWindowIsImmediate) {
  const EuclideanPlane space({{0, 0}, 3, 3});
  EXPECT_TRUE(analyze(model_of(space, {{0.1, 0}}, 3.0)).crossing);
}

TEST(Crossing, ShellOffsetOverride) {
  const EuclideanPlane space({{0, 0}, 10, 1});
  const auto m = model_of(space, {{0, 0}, {1.5, 0}, {3, 0}, {4.5, 0}, {6, 0}, {7.5, 0}}, 1.0);
  EXPECT_FALSE(analyze(m).crossing);
  CrossingGeometry loose;
  loose.shell_offset = 2.5;
  EXPECT_TRUE(analyze(m, loose).crossing);
}

TEST(Crossing, PaddingMustCoverRadius) {
  const EuclideanPlane space({{0, 0}, 10, 0.5});
  EXPECT_THROW(analyze(model_of(space, {{0, 0}}, 1.0)), Error);
}

TEST(Crossing, MonotoneInRadius) {
  const EuclideanPlane space({{0, 0}, 8, 1.2});
  CrossingExplorer<EuclideanPlane> ex(space, 1.2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cfg = ex.materialize(0.5, seed, 0);
    std::size_t prev_components = cfg.size() + 1;
    bool crossed = false;
    for (const double R : {0.0, 0.3, 0.6, 0.9, 1.2}) {
      const auto rep = analyze(BooleanModel<EuclideanPlane>{space, cfg, R});
      EXPECT_LE(rep.component_count(), prev_components);
      prev_components = rep.component_count();
      if (crossed) {
        EXPECT_TRUE(rep.crossing) << "seed " << seed << " R " << R;
      }
      crossed = crossed || rep.crossing;
    }
  }
}

TEST(UnionFind, BasicOperations) {
  UnionFind uf(6);
  EXPECT_TRUE(uf.unite(0, 1));
  EXPECT_TRUE(uf.unite(2, 3));
  EXPECT_FALSE(uf.unite(1, 0));
  EXPECT_TRUE(uf.unite(1, 3));
  EXPECT_TRUE(uf.same(0, 2));
  EXPECT_FALSE(uf.same(0, 4));
  EXPECT_EQ(uf.component_size(3), 4u);
  EXPECT_EQ(uf.add(), 6u);
  EXPECT_EQ(uf.component_size(6), 1u);
}
