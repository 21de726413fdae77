#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <aego/sir.hpp>

#include "support.hpp"

using namespace aego;
using test_support::pt;

namespace {

Eigen::MatrixXd line_pool(int m) {
  Eigen::MatrixXd P(m, 1);
  for (int i = 0; i < m; ++i) P(i, 0) = (i + 0.5) / m;
  return P;
}

}  // namespace

TEST(Weigh, NormalizesRawValues) {
  const WeightedPool wp = weigh_values(line_pool(3), {2.0, 1.0, 1.0});
  EXPECT_EQ(wp.weights, (std::vector<double>{0.5, 0.25, 0.25}));
  EXPECT_FALSE(wp.degenerate);
  EXPECT_EQ(wp.raw, (std::vector<double>{2.0, 1.0, 1.0}));
}

TEST(Weigh, EqualValuesGiveUniformWeights) {
  const WeightedPool wp = weigh_values(line_pool(5), std::vector<double>(5, 0.3));
  for (double w : wp.weights) EXPECT_DOUBLE_EQ(w, 0.2);
}

TEST(Weigh, UnderflowFallsBackToUniform) {
  const WeightedPool wp = weigh_values(line_pool(3), {0.0, 0.0, 0.0});
  EXPECT_TRUE(wp.degenerate);
  for (double w : wp.weights) EXPECT_EQ(w, 1.0 / 3.0);
  EXPECT_TRUE(weigh_values(line_pool(3), {1e-310, 0.0, 0.0}).degenerate);
}

TEST(Weigh, SumsToOneAndMatchesEi) {
  const Domain d = Domain::cube(2, -1.0, 1.0);
  SeededRng rng(1);
  const CandidatePool lhs = lhs_initial_design(12, d, rng);
  Design design(d);
  for (std::size_t i = 0; i < 12; ++i) design.add(lhs.point(i), std::sin(3.0 * lhs.point(i).sum()), Origin::initial);
  const auto model = KrigingModel::fit(design, rng);
  const EiContext ctx(model);
  const ShiftedPool shifted = random_shift(sobol_pool(100, d), d, rng);
  const WeightedPool wp = weigh(shifted, ctx);
  double sum = 0.0;
  for (double w : wp.weights) {
    EXPECT_GE(w, 0.0);
    sum += w;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  std::vector<Point> xs;
  for (std::size_t i = 0; i < shifted.size(); ++i) xs.push_back(shifted.point(i));
  const auto e = ei_batch(ctx, xs);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(wp.raw[i], e[i], 1e-12);
}

TEST(Resample, ExhaustiveDrawReturnsWholePool) {
  const WeightedPool wp = weigh_values(line_pool(6), {1, 2, 3, 4, 5, 6});
  SeededRng rng(2);
  const auto draws = resample(wp, 6, rng, {}, Domain::unit(1));
  std::set<std::size_t> idx;
  for (const auto& d : draws) {
    idx.insert(d.index);
    EXPECT_EQ(d.x, wp.point(d.index));
    EXPECT_EQ(d.weight, wp.weights[d.index]);
  }
  EXPECT_EQ(idx.size(), 6u);
}

TEST(Resample, PointMass) {
  const WeightedPool wp = weigh_values(line_pool(3), {1.0, 0.0, 0.0});
  SeededRng rng(3);
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(resample(wp, 1, rng, {}, Domain::unit(1)).front().index, 0u);
}

TEST(Resample, FirstDrawFollowsWeightsChiSquare) {
  const std::vector<double> w{0.5, 0.3, 0.2};
  const WeightedPool wp = weigh_values(line_pool(3), w);
  SeededRng rng(4);
  const int n = 100000;
  std::array<int, 3> counts{};
  for (int i = 0; i < n; ++i) ++counts[resample(wp, 1, rng, {}, Domain::unit(1)).front().index];
  double chi2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double e = n * w[static_cast<std::size_t>(k)];
    chi2 += (counts[static_cast<std::size_t>(k)] - e) * (counts[static_cast<std::size_t>(k)] - e) / e;
  }
  const double p = std::exp(-chi2 / 2.0);  // chi-square survival, 2 degrees of freedom
  EXPECT_GT(p, 0.001) << "chi2 = " << chi2;
}

TEST(Resample, WithoutReplacementAndSubsetOfPool) {
  SeededRng rng(5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> raw(10);
    for (auto& r : raw) r = rng.uniform();
    const WeightedPool wp = weigh_values(line_pool(10), raw);
    const auto draws = resample(wp, 5, rng, {}, Domain::unit(1));
    std::set<std::size_t> idx;
    for (const auto& d : draws) {
      ASSERT_TRUE(idx.insert(d.index).second);
      ASSERT_EQ(d.x, wp.point(d.index));
    }
  }
}

TEST(Resample, ExclusionsNeverReturned) {
  const WeightedPool wp = weigh_values(line_pool(10), std::vector<double>(10, 1.0));
  const std::vector<Point> excl{wp.point(2), wp.point(5), pt({wp.point(7)[0] + 1e-10})};
  SeededRng rng(6);
  for (int t = 0; t < 200; ++t) {
    for (const auto& d : resample(wp, 7, rng, excl, Domain::unit(1))) {
      ASSERT_NE(d.index, 2u);
      ASSERT_NE(d.index, 5u);
      ASSERT_NE(d.index, 7u);
    }
  }
}

TEST(Resample, PoolCapacityBoundary) {
  const WeightedPool wp = weigh_values(line_pool(2), {0.4, 0.6});
  const std::vector<Point> excl{wp.point(0)};
  SeededRng rng(7);
  const auto one = resample(wp, 1, rng, excl, Domain::unit(1));
  EXPECT_EQ(one.front().index, 1u);
  EXPECT_THROW(resample(wp, 2, rng, excl, Domain::unit(1)), PoolExhausted);
}

TEST(Resample, ZeroWeightsDrawUniformlyAmongAdmissible) {
  const WeightedPool wp = weigh_values(line_pool(4), {1.0, 0.0, 0.0, 0.0});
  const std::vector<Point> excl{wp.point(0)};
  SeededRng rng(8);
  std::array<int, 4> counts{};
  for (int i = 0; i < 30000; ++i) ++counts[resample(wp, 1, rng, excl, Domain::unit(1)).front().index];
  EXPECT_EQ(counts[0], 0);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(counts[static_cast<std::size_t>(k)], 10000, 500);
}

TEST(Resample, DeterministicPerSeed) {
  const WeightedPool wp = weigh_values(line_pool(20), std::vector<double>(20, 1.0));
  SeededRng a(9), b(9);
  const auto x = resample(wp, 8, a, {}, Domain::unit(1));
  const auto y = resample(wp, 8, b, {}, Domain::unit(1));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].index, y[i].index);
}
