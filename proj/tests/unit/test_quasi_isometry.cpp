#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "percolab/percolab.hpp"

using namespace percolab;

namespace {

WindowSpec<GroupElement> gwin(double r, double pad = 0.0) { return {{0, 0}, r, pad}; }

std::vector<GroupElement> window_vertices(const CayleyGraph& g) {
  std::vector<GroupElement> out;
  for (const auto& v : g.region_vertices()) {
    if (g.in_window(v)) out.push_back(v);
  }
  return out;
}

QuasiIsometryMap<EuclideanPlane, CayleyGraph> verified_rounding(double L) {
  const double r = std::floor(L - std::sqrt(0.5));
  auto F = rounding_map({{0, 0}, L, 0}, gwin(r, std::ceil(L * std::sqrt(2.0) + 1.0) - r));
  Stream s = make_stream(1, 0, 0, Purpose::Sampling);
  F.verified = qi_check(F, 2000, s);
  return F;
}

}  // namespace

TEST(QiCheck, IdentityPasses) {
  const CayleyGraph g(GroupSpec::free_abelian(2), gwin(8));
  const auto F = identity_map(g);
  const auto pts = window_vertices(g);
  const auto v = qi_check_points(F, pts, pts);
  EXPECT_EQ(v.status, QiStatus::PassedOnSample);
  EXPECT_FALSE(v.witness.has_value());
}

TEST(QiCheck, StdToKingPassesExhaustively) {
  const auto F = std_to_king(gwin(8), gwin(8));
  const auto pts = window_vertices(F.domain);
  const auto v = qi_check_points(F, pts, pts);
  EXPECT_EQ(v.status, QiStatus::PassedOnSample);
  EXPECT_EQ(v.pairs_tested, pts.size() * (pts.size() - 1) / 2);
}

TEST(QiCheck, TightenedParametersAreViolated) {
  auto F = std_to_king(gwin(8), gwin(8));
  F.params.alpha = 1.5;  // d_std = 2 d_king on diagonals
  const auto pts = window_vertices(F.domain);
  const auto v = qi_check_points(F, pts, pts);
  ASSERT_EQ(v.status, QiStatus::Violated);
  EXPECT_EQ(v.witness->axiom, QiAxiom::LowerBound);
}

TEST(QiCheck, SquaringIsNotQuasiIsometric) {
  const EuclideanPlane plane({{0, 0}, 10, 0});
  QuasiIsometryMap<EuclideanPlane, EuclideanPlane> F{
      "square", plane, EuclideanPlane({{0, 0}, 100, 0}),
      [](const Vec2& p) { return Vec2{p.x * std::abs(p.x), p.y}; }, {2.0, 1.0, 1.0}, {}, {}};
  Stream s = make_stream(2, 0, 0, Purpose::Sampling);
  const auto v = qi_check(F, 2000, s);
  ASSERT_EQ(v.status, QiStatus::Violated);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_GT(std::abs(v.witness->observed - v.witness->bound), 0.0);
}

TEST(QiCheck, DensityWitnessWithoutHint) {
  // every codomain point is far from the image of a one-point domain
  const CayleyGraph dom(GroupSpec::free_abelian(2), gwin(0.5));
  QuasiIsometryMap<CayleyGraph, CayleyGraph> F{
      "collapse", dom, CayleyGraph(GroupSpec::free_abelian(2), gwin(10)),
      [](const GroupElement&) { return GroupElement{0, 0}; }, {1.0, 0.0, 1.0}, {}, {}};
  Stream s = make_stream(3, 0, 0, Purpose::Sampling);
  const auto v = qi_check(F, 500, s);
  ASSERT_EQ(v.status, QiStatus::Violated);
  EXPECT_EQ(v.witness->axiom, QiAxiom::Density);
  EXPECT_GT(v.witness->observed, 1.0);
}

TEST(QiCheck, RoundingAndNetMapPass) {
  EXPECT_EQ(verified_rounding(10).verified.status, QiStatus::PassedOnSample);
  const EuclideanPlane ambient({{0, 0}, 8, 0});
  const auto net = epsilon_net(ambient, 1.0, 4);
  const auto F = net_map(net, euclidean_net_params(net.epsilon, net.rho));
  Stream s = make_stream(4, 0, 0, Purpose::Sampling);
  EXPECT_EQ(qi_check(F, 2000, s).status, QiStatus::PassedOnSample);
}

TEST(QuasiInverse, RoundingWithinHalfDiagonal) {
  const auto F = verified_rounding(6);
  std::vector<GroupElement> net;
  std::vector<Vec2> lattice;
  for (const auto& v : F.codomain.region_vertices()) {
    net.push_back(v);
    lattice.push_back({static_cast<double>(v[0]), static_cast<double>(v[1])});
  }
  Stream s = make_stream(5, 0, 0, Purpose::Sampling);
  std::vector<Vec2> tests;
  for (int k = 0; k < 1000; ++k) tests.push_back(F.domain.sample_in_region(s));
  const auto G = quasi_inverse(F, net, lattice, tests);
  EXPECT_LE(G.gamma_tilde, std::sqrt(0.5) + 1e-12);
  EXPECT_GT(G.gamma_tilde, 0.5);
}

TEST(QuasiInverse, StdToKingIsExact) {
  auto F = std_to_king(gwin(6), gwin(6));
  F.verified.status = QiStatus::PassedOnSample;
  const auto pts = window_vertices(F.domain);
  const auto G = quasi_inverse(F, window_vertices(F.codomain), pts, pts);
  EXPECT_DOUBLE_EQ(G.gamma_tilde, 0.0);
  EXPECT_EQ(G.map(GroupElement{2, -3}), (GroupElement{2, -3}));
}

TEST(QuasiInverse, Preconditions) {
  auto F = std_to_king(gwin(4), gwin(4));
  const auto pts = window_vertices(F.domain);
  EXPECT_THROW(quasi_inverse(F, pts, pts, pts), Error);
  F.verified.status = QiStatus::PassedOnSample;
  try {
    quasi_inverse(F, pts, {}, pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySample);
  }
}

TEST(Radius, ForwardExamples) {
  EXPECT_DOUBLE_EQ(radius_forward(1.0, 2.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(radius_forward(3.0, 2.0, 2.0), 8.0);
  EXPECT_THROW(radius_forward(0.0, 1.0, 0.0), Error);
}

TEST(Radius, BackwardExamples) {
  EXPECT_DOUBLE_EQ(radius_backward(2.1, 1.0, 0.0, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(radius_backward(10.0, 2.0, 1.0, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(radius_backward(2.5, 1.0, 0.0, 0.25), 0.375);
}

TEST(Radius, BackwardTooSmall) {
  try {
    radius_backward(3.0, 2.0, 2.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RadiusTooSmall);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("radius too small for backward transport"), std::string::npos);
    EXPECT_NE(msg.find("alpha*beta + 2*alpha*k"), std::string::npos);
  }
}

TEST(Radius, RoundingContainments) {
  const auto F = verified_rounding(20);
  const double R = 12.0;
  const double fwd = radius_forward(R, 2.0, 2.0);
  const double back = radius_backward(R, 2.0, 2.0, 1.0);
  Stream s = make_stream(6, 0, 0, Purpose::Sampling);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 p = F.domain.sample_in_ball({0, 0}, 4.0, s);
    const Vec2 q = F.domain.sample_in_ball(p, R, s);
    EXPECT_LE(F.codomain.distance(F(p), F(q)), fwd + 1e-9);
    // every lattice point of B(F p, R') is the image of a point of B(p, R)
    for (const auto& z : F.codomain.ball_vertices(F(p), static_cast<int>(std::floor(back)))) {
      const Vec2 pre{static_cast<double>(z[0]), static_cast<double>(z[1])};
      EXPECT_LE(F.domain.distance(p, pre), R);
    }
  }
}

TEST(TransportedRadius, LegsAndDoubleGamma) {
  const QiParams p{2.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(transported_radius(p, 5.0, TransportDirection::ForwardSupercritical), 11.0);
  EXPECT_DOUBLE_EQ(transported_radius(p, 5.0, TransportDirection::ForwardSubcritical), 0.5);
  EXPECT_DOUBLE_EQ(transported_radius(p, 5.0, TransportDirection::ForwardSupercritical, {true}), 12.0);
  EXPECT_DOUBLE_EQ(transported_radius({2.0, 0.0, 0.0}, 3.0, TransportDirection::ForwardSubcritical), 0.0);
}

TEST(InducedPartition, MatchesWindowPartition) {
  auto F = king_to_std(gwin(8), gwin(8, 2));
  F.params.gamma = 2.0;
  const auto a = induce_partition(F, 9);
  const auto b = build_window_partition(F.codomain, 2.0, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.cell(i).center, b.cell(i).center);
  F.params.gamma = 0.0;
  EXPECT_DOUBLE_EQ(induce_partition(F, 9).gamma(), 1.0);
}

TEST(InducedPartition, PreimageDiameterBound) {
  auto F = king_to_std(gwin(8), gwin(8, 8));
  F.params.gamma = 2.0;
  const auto part = induce_partition(F, 10);
  const auto rep = check_preimages(F, part, 0, 10);
  EXPECT_EQ(rep.unassigned, 0u);
  EXPECT_DOUBLE_EQ(rep.diameter_bound, 8.0);
  EXPECT_LE(rep.max_cell_diameter, rep.diameter_bound);
  EXPECT_GT(rep.max_cell_diameter, 0.0);

  const auto R = verified_rounding(6);
  const auto rrep = check_preimages(R, induce_partition(R, 11), 5000, 11);
  EXPECT_LE(rrep.max_cell_diameter, rrep.diameter_bound);
}

TEST(InducedMeasure, IdentityStarEqualsPrime) {
  const CayleyGraph g(GroupSpec::free_abelian(2), gwin(6));
  auto F = identity_map(g);
  F.params.gamma = 2.0;
  const auto table = induce_measure_table(F, induce_partition(F, 3), 3);
  for (const auto& c : table.partition.cells()) EXPECT_DOUBLE_EQ(c.measure_star, c.measure_prime);
  EXPECT_DOUBLE_EQ(table.total_star(), g.window_measure());
  for (const double se : table.star_se) EXPECT_DOUBLE_EQ(se, 0.0);
}

TEST(InducedMeasure, RoundingUnitCells) {
  const auto F = verified_rounding(10);
  InduceOptions opts;
  opts.measure_samples = 4'000'000;
  const auto table = induce_measure_table(F, induce_partition(F, 12, opts), 12, opts);
  EXPECT_NEAR(table.total_star(), 100.0 * std::numbers::pi, 0.01 * 100.0 * std::numbers::pi);
  double sum = 0, n = 0;
  for (const auto& c : table.partition.cells()) {
    if (!c.in_window) continue;
    EXPECT_NEAR(c.measure_star, 1.0, 0.05) << "cell " << c.index;
    sum += c.measure_star;
    n += 1;
  }
  EXPECT_NEAR(sum / n, 1.0, 0.01);
  const auto mm = mm_check(table);
  EXPECT_TRUE(mm.compatible) << mm.violation;
  EXPECT_NEAR(mm.C3, 1.0, 0.05);
  EXPECT_NEAR(mm.C4, 1.0, 0.05);
}

TEST(InducedMeasure, DisplayedAndAdditiveForms) {
  const CayleyGraph g(GroupSpec::free_abelian(2), gwin(1));
  const auto F = identity_map(g);
  auto part = build_window_partition(g, 1.0, 1);
  ASSERT_EQ(part.size(), 5u);
  auto table = induce_measure_table(F, part, 1);
  std::vector<double> star(5, 1.0);
  star[0] = 2.0;
  star[1] = 4.0;
  table.partition.set_measure_star(star);
  EXPECT_DOUBLE_EQ(induced_measure_displayed(table, 0.5, {0, 1}), 3.0);
  const std::vector<GroupElement> D{table.partition.cell(0).center, table.partition.cell(1).center};
  EXPECT_DOUBLE_EQ(induced_measure(table, D), 6.0);
  EXPECT_THROW(induced_measure_displayed(table, 0.5, {}), Error);
}

TEST(InducedMeasure, AdditiveOverDisjointRegions) {
  const auto F = verified_rounding(6);
  const auto table = [&] {
    InduceOptions opts;
    opts.measure_samples = 200'000;
    return induce_measure_table(F, induce_partition(F, 2, opts), 2, opts);
  }();
  const auto verts = window_vertices(F.codomain);
  std::vector<GroupElement> left, right;
  for (const auto& v : verts) (v[0] < 0 ? left : right).push_back(v);
  EXPECT_NEAR(induced_measure(table, left) + induced_measure(table, right),
              induced_measure(table, verts), 1e-9);
}

TEST(InducedMeasure, ContinuumCodomainMonotone) {
  // R^2 -> R^2 scaling by 1/2 squeezes mass: mu* = 4 mu' in the interior.
  const EuclideanPlane dom({{0, 0}, 6, 0});
  QuasiIsometryMap<EuclideanPlane, EuclideanPlane> F{
      "halve", dom, EuclideanPlane({{0, 0}, 3, 1}),
      [](const Vec2& p) { return Vec2{0.5 * p.x, 0.5 * p.y}; }, {2.0, 0.0, 1.0},
      [](const Vec2& z) { return Vec2{2 * z.x, 2 * z.y}; }, {}};
  InduceOptions opts;
  opts.measure_samples = 400'000;
  opts.partition.samples_per_cell = 4000;
  const auto table = induce_measure_table(F, induce_partition(F, 5, opts), 5, opts);
  const SampledRegion<Vec2> small{{0, 0}, 1.0, [](const Vec2&) { return true; }};
  const SampledRegion<Vec2> large{{0, 0}, 2.0, [](const Vec2&) { return true; }};
  const double a = induced_measure(table, small, 100'000, 1);
  const double b = induced_measure(table, large, 100'000, 1);
  EXPECT_LT(a, b);
  EXPECT_NEAR(a, 4.0 * std::numbers::pi, 0.25 * 4.0 * std::numbers::pi);
}

TEST(InducedMeasure, RequiresStarTable) {
  const CayleyGraph g(GroupSpec::free_abelian(2), gwin(2));
  InducedMeasureTable<CayleyGraph> table{build_window_partition(g, 1.0, 1), {}, 0, 0, 0, 0};
  try {
    induced_measure(table, g.region_vertices());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MeasureNotInduced);
  }
}

TEST(MmCheck, StdToKingSingletons) {
  const auto F = std_to_king(gwin(10), gwin(5, 5));
  const auto mm = mm_check(induce_measure_table(F, induce_partition(F, 1), 1));
  EXPECT_TRUE(mm.compatible);
  EXPECT_DOUBLE_EQ(mm.C1, 1.0);
  EXPECT_DOUBLE_EQ(mm.C4, 1.0);
  EXPECT_DOUBLE_EQ(mm.Cbar1, 1.0);
  EXPECT_DOUBLE_EQ(mm.Cbar2, 1.0);
}

TEST(MmCheck, ConstantsWithinDegreeBound) {
  auto F = std_to_king(gwin(14), gwin(5, 5));
  F.params.gamma = 2.0;
  const auto table = induce_measure_table(F, induce_partition(F, 4), 4);
  const auto mm = mm_check(table);
  ASSERT_TRUE(mm.compatible) << mm.violation;
  // a strict radius-2 king ball is the 3x3 block: max degree 8, plus 1
  for (const double c : {mm.C1, mm.C2, mm.C3, mm.C4}) {
    EXPECT_GE(c, 1.0);
    EXPECT_LE(c, 9.0);
  }
  for (const auto& c : table.partition.cells()) {
    if (!c.in_window) continue;
    EXPECT_LE(mm.Cbar1 * c.measure_prime, c.measure_star + 1e-12);
    EXPECT_GE(mm.Cbar2 * c.measure_prime, c.measure_star - 1e-12);
  }
}

TEST(MmCheck, MissedCellReported) {
  const auto F = std_to_king(gwin(10), gwin(10));
  const auto mm = mm_check(induce_measure_table(F, induce_partition(F, 1), 1));
  EXPECT_FALSE(mm.compatible);
  EXPECT_DOUBLE_EQ(mm.C3, 0.0);
  EXPECT_NE(mm.violation.find("C3 = 0"), std::string::npos);
}

TEST(Transport, CountsMatchPerCell) {
  auto F = std_to_king(gwin(14, 3), gwin(5, 5));
  F.params.gamma = 2.0;
  const auto table = induce_measure_table(F, induce_partition(F, 7), 7);
  const auto cfg = sample_bernoulli(F.domain, [](const GroupElement&) { return 0.3; }, 7);
  const auto indexed = index_by_preimage(F, table.partition, cfg);
  const auto moved = transport_configuration(table, indexed, 8);
  EXPECT_EQ(indexed.cell_counts(table.partition.size()), moved.cell_counts(table.partition.size()));
  EXPECT_GT(moved.size(), 0u);
  EXPECT_TRUE(transport_configuration(table, PointConfiguration<GroupElement>{}, 8).empty());
}

TEST(Transport, PointsStayWithinTwoGammaOfImage) {
  auto F = std_to_king(gwin(14, 3), gwin(5, 5));
  F.params.gamma = 2.0;
  const auto table = induce_measure_table(F, induce_partition(F, 7), 7);
  const auto cfg = sample_bernoulli(F.domain, [](const GroupElement&) { return 0.3; }, 9);
  const auto indexed = index_by_preimage(F, table.partition, cfg);
  const auto moved = transport_configuration(table, indexed, 10);
  // both orderings are by cell, so the k-th moved point sits in the k-th domain point's cell
  std::vector<std::size_t> order(indexed.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return indexed.cells[a] < indexed.cells[b]; });
  ASSERT_EQ(order.size(), moved.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto x = indexed.points[order[k]];
    EXPECT_LE(F.codomain.distance(F(x), moved.points[k]), 2.0 * F.params.gamma);
  }
}

TEST(Transport, ModelRadii) {
  auto F = std_to_king(gwin(10, 5), gwin(5, 12));
  F.params.gamma = 1.0;
  const auto table = induce_measure_table(F, induce_partition(F, 7), 7);
  const auto cfg = sample_bernoulli(F.domain, [](const GroupElement&) { return 0.2; }, 11);
  const BooleanModel<CayleyGraph> model{F.domain, cfg, 5.0};
  const auto sup = transport_model(F, table, model, TransportDirection::ForwardSupercritical, 12);
  const auto sub = transport_model(F, table, model, TransportDirection::ForwardSubcritical, 12);
  EXPECT_DOUBLE_EQ(sup.radius, 11.0);
  EXPECT_DOUBLE_EQ(sub.radius, 0.5);
  EXPECT_EQ(sup.config.size(), sub.config.size());
  const BooleanModel<CayleyGraph> thin_model{F.domain, cfg, 3.0};
  try {
    transport_model(F, table, thin_model, TransportDirection::ForwardSubcritical, 12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RadiusTooSmall);
  }
}
