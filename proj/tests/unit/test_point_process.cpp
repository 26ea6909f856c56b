#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/disk_integral.hpp"
#include "percolab/percolab.hpp"

using namespace percolab;

namespace {

// Disk of area 10, one partition reused by every test in this file.
const CellPartition<EuclideanPlane>& area_ten() {
  static const auto part = build_window_partition(
      EuclideanPlane({{0.0, 0.0}, std::sqrt(10.0 / std::numbers::pi), 0.0}), 1.0, 11);
  return part;
}

double total_prime(const CellPartition<EuclideanPlane>& p) {
  double t = 0;
  for (const auto& c : p.cells()) t += c.measure_prime;
  return t;
}

}  // namespace

TEST(BernoulliRetention, AnalyticValues) {
  EXPECT_DOUBLE_EQ(bernoulli_retention(0.0, 1.0), 0.0);
  EXPECT_NEAR(bernoulli_retention(std::log(2.0), 1.0), 0.5, 1e-12);
  EXPECT_NEAR(bernoulli_retention(0.8982, 1.0), 0.5927, 1e-4);
  EXPECT_LT(bernoulli_retention(50.0, 1.0), 1.0 + 1e-15);
}

TEST(SamplePoisson, VanishingIntensityIsEmpty) {
  int empty = 0;
  for (int t = 0; t < 1000; ++t) {
    empty += sample_poisson(area_ten(), Homogeneous{1e-12}, MeasureField::Prime, 100 + t).empty();
  }
  EXPECT_GE(empty, 999);
}

TEST(SamplePoisson, MeanCountIsLambdaTimesMeasure) {
  ASSERT_NEAR(total_prime(area_ten()), 10.0, 0.05);
  std::vector<double> counts;
  for (int t = 0; t < 1000; ++t) {
    counts.push_back(static_cast<double>(
        sample_poisson(area_ten(), Homogeneous{2.0}, MeasureField::Prime, 5000 + t).size()));
  }
  EXPECT_NEAR(mean_var(counts).mean, 20.0, 1.4);
}

TEST(SamplePoisson, CellCountsArePoissonDispersed) {
  const auto& part = area_ten();
  std::vector<double> c0;
  for (int t = 0; t < 10'000; ++t) {
    const auto cfg = sample_poisson(part, Homogeneous{2.0}, MeasureField::Prime, 90'000 + t);
    c0.push_back(static_cast<double>(cfg.cell_counts(part.size())[0]));
  }
  const auto mv = mean_var(c0);
  EXPECT_NEAR(mv.variance / mv.mean, 1.0, 0.1);
  EXPECT_NEAR(mv.mean, 2.0 * part.cell(0).measure_prime, 4 * mv.standard_error());
}

TEST(SamplePoisson, PointsStayInTheirCells) {
  const auto& part = area_ten();
  const auto cfg = sample_poisson(part, Homogeneous{5.0}, MeasureField::Prime, 3);
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    EXPECT_EQ(part.locate(cfg.points[k]), std::optional<std::size_t>(cfg.cells[k]));
  }
}

TEST(SamplePoisson, StarFieldRequiresInducedMeasure) {
  try {
    sample_poisson(area_ten(), Homogeneous{1.0}, MeasureField::Star, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MeasureNotInduced);
    EXPECT_NE(std::string(e.what()).find("measure not induced"), std::string::npos);
  }
}

TEST(SamplePoisson, Deterministic) {
  const auto a = sample_poisson(area_ten(), Homogeneous{3.0}, MeasureField::Prime, 77);
  const auto b = sample_poisson(area_ten(), Homogeneous{3.0}, MeasureField::Prime, 77);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.points[k], b.points[k]);
    EXPECT_EQ(a.cells[k], b.cells[k]);
  }
}

TEST(SamplePoisson, GraphCounterpartOnStarMeasure) {
  const CayleyGraph g(GroupSpec::free_abelian(2), {{0, 0}, 3, 0});
  auto part = build_window_partition(g, 1.0, 1);
  std::vector<double> star(part.size(), 2.0);
  part.set_measure_star(star);
  double total = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) total += static_cast<double>(sample_poisson(part, Homogeneous{1.0}, MeasureField::Star, t).size());
  const double expected = 2.0 * g.region_measure();
  EXPECT_NEAR(total / trials, expected, 4 * std::sqrt(expected / trials));
}

TEST(SampleBernoulli, ConstantRetention) {
  const CayleyGraph g(GroupSpec::free_abelian(2), {{0, 0}, 10, 0});
  const auto all = sample_bernoulli(g, [](const GroupElement&) { return 1.0; }, 1);
  EXPECT_EQ(all.size(), g.region_vertices().size());
  const auto none = sample_bernoulli(g, [](const GroupElement&) { return 0.0; }, 1);
  EXPECT_TRUE(none.empty());
}

TEST(SampleBernoulli, HalfRetentionBinomial) {
  const CayleyGraph g(GroupSpec::free_abelian(2), {{0, 0}, 70, 0});
  const double n = static_cast<double>(g.region_vertices().size());
  ASSERT_NEAR(n, 1e4, 100);
  const auto cfg = sample_bernoulli(g, [](const GroupElement&) { return 0.5; }, 12);
  EXPECT_NEAR(static_cast<double>(cfg.size()), 0.5 * n, 3.0 * std::sqrt(n) / 2.0);
}

TEST(SampleBernoulli, RetentionOutOfRange) {
  const CayleyGraph g(GroupSpec::free_abelian(2), {{0, 0}, 3, 0});
  EXPECT_THROW(sample_bernoulli(g, [](const GroupElement&) { return 1.5; }, 1), Error);
  EXPECT_THROW(sample_bernoulli(g, [](const GroupElement&) { return -0.1; }, 1), Error);
}

TEST(Thin, Extremes) {
  const auto cfg = sample_poisson(area_ten(), Homogeneous{4.0}, MeasureField::Prime, 8);
  const auto same = thin(cfg, [](const Vec2&) { return 1.0; }, 1);
  ASSERT_EQ(same.size(), cfg.size());
  for (std::size_t k = 0; k < cfg.size(); ++k) EXPECT_EQ(same.points[k], cfg.points[k]);
  EXPECT_TRUE(thin(cfg, [](const Vec2&) { return 0.0; }, 1).empty());
  EXPECT_THROW(thin(cfg, [](const Vec2&) { return 2.0; }, 1), Error);
}

TEST(Thin, HalfOfDoubleMatchesDirect) {
  std::vector<long long> thinned, direct;
  for (int t = 0; t < 1000; ++t) {
    const auto two = sample_poisson(area_ten(), Homogeneous{0.2}, MeasureField::Prime, 2 * t);
    thinned.push_back(static_cast<long long>(thin(two, [](const Vec2&) { return 0.5; }, 7 + t).size()));
    direct.push_back(static_cast<long long>(
        sample_poisson(area_ten(), Homogeneous{0.1}, MeasureField::Prime, 2 * t + 1).size()));
  }
  const auto chi = chi_square_homogeneity({thinned, direct});
  EXPECT_GT(chi.p_value, 0.01) << "statistic " << chi.statistic << " dof " << chi.dof;
}

TEST(CoupleMonotone, EqualIntensitiesIdentical) {
  const auto pair = couple_monotone(area_ten(), 1.5, 1.5, 4);
  ASSERT_EQ(pair.low.size(), pair.high.size());
  for (std::size_t k = 0; k < pair.low.size(); ++k) EXPECT_EQ(pair.low.points[k], pair.high.points[k]);
}

TEST(CoupleMonotone, SubsetAndMarginal) {
  std::vector<double> lows;
  for (int t = 0; t < 1000; ++t) {
    const auto pair = couple_monotone(area_ten(), 0.5, 2.0, 300 + t);
    ASSERT_TRUE(is_subconfiguration(pair.low, pair.high));
    lows.push_back(static_cast<double>(pair.low.size()));
  }
  const double expected = 0.5 * total_prime(area_ten());
  EXPECT_NEAR(mean_var(lows).mean, expected, 3.0 * std::sqrt(expected / 1000.0));
}

TEST(CoupleMonotone, OrderRequired) {
  try {
    couple_monotone(area_ten(), 2.0, 1.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("lambda_low exceeds lambda_high"), std::string::npos);
  }
}

TEST(SandwichBounded, ConstantDensityCollapses) {
  const Bounded<Vec2> flat{[](const Vec2&) { return 1.25; }, 1.25, 1.25};
  const auto s = sandwich_bounded(area_ten(), flat, 5);
  EXPECT_EQ(s.low.size(), s.high.size());
  EXPECT_EQ(s.mid.size(), s.high.size());
}

TEST(SandwichBounded, InclusionsAndIntegral) {
  // off-center disk so the sine term does not integrate to zero
  const double cx = 1.5, L = 4.0;
  const EuclideanPlane space({{cx, 0.5}, L, 0.0});
  const auto part = build_window_partition(space, 1.0, 21);
  const Bounded<Vec2> lam{[](const Vec2& p) { return 1.0 + 0.5 * std::sin(p.x); }, 0.5, 1.5};
  std::vector<double> mids;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const auto s = sandwich_bounded(part, lam, 7000 + t);
    ASSERT_TRUE(is_subconfiguration(s.low, s.mid));
    ASSERT_TRUE(is_subconfiguration(s.mid, s.high));
    mids.push_back(static_cast<double>(s.mid.size()));
  }
  const double closed = oracle::sine_intensity_integral(0.5, cx, L);
  const double quad = oracle::polar_quadrature([](double x, double) { return 1.0 + 0.5 * std::sin(x); }, cx, 0.5, L);
  ASSERT_NEAR(closed, quad, 1e-6);
  EXPECT_NEAR(mean_var(mids).mean, closed, 3.0 * std::sqrt(closed / trials));
}

TEST(SandwichBounded, DensityOutsideBoundsRejected) {
  const Bounded<Vec2> bad{[](const Vec2&) { return 3.0; }, 0.5, 1.5};
  EXPECT_THROW(sandwich_bounded(area_ten(), bad, 1), Error);
  EXPECT_THROW(spot_check_bounded(EuclideanPlane({{0, 0}, 2, 0}), bad, 1), Error);
}
