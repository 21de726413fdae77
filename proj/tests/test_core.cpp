#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include <aego/core.hpp>

#include "support.hpp"

using namespace aego;
using test_support::pt;

TEST(Domain, RejectsBadBounds) {
  EXPECT_THROW(Domain(pt({0.0, 1.0}), pt({1.0})), DimensionMismatch);
  EXPECT_THROW(Domain(pt({0.0}), pt({0.0})), Error);
  EXPECT_THROW(Domain(pt({2.0}), pt({1.0})), Error);
  EXPECT_NO_THROW(Domain(pt({-1.0}), pt({1.0})));
}

TEST(ClampOrReject, InteriorPointUnchanged) {
  const Point p = pt({0.5, 0.5});
  EXPECT_EQ(clamp_or_reject(p, Domain::unit(2)), p);
}

TEST(ClampOrReject, ReportsOffendingCoordinate) {
  try {
    clamp_or_reject(pt({1.5, 0.5}), Domain::unit(2));
    FAIL() << "expected OutOfDomain";
  } catch (const OutOfDomain& e) {
    EXPECT_EQ(e.coordinate(), 0u);
  }
  try {
    clamp_or_reject(pt({0.5, -0.1}), Domain::unit(2));
    FAIL() << "expected OutOfDomain";
  } catch (const OutOfDomain& e) {
    EXPECT_EQ(e.coordinate(), 1u);
  }
}

TEST(ClampOrReject, BoundaryIsInside) {
  const Point p = pt({0.0, 1.0});
  EXPECT_EQ(clamp_or_reject(p, Domain::unit(2)), p);
}

TEST(ClampOrReject, DimensionMismatch) {
  EXPECT_THROW(clamp_or_reject(pt({0.5}), Domain::unit(2)), DimensionMismatch);
}

TEST(ScaleToUnit, BraninCorners) {
  const Domain d(pt({-5.0, 0.0}), pt({10.0, 15.0}));
  EXPECT_EQ(scale_to_unit(pt({-5.0, 0.0}), d), pt({0.0, 0.0}));
  EXPECT_EQ(scale_to_unit(pt({10.0, 15.0}), d), pt({1.0, 1.0}));
  EXPECT_EQ(scale_to_unit(pt({2.5, 7.5}), d), pt({0.5, 0.5}));
  EXPECT_THROW(scale_to_unit(pt({11.0, 0.0}), d), OutOfDomain);
}

TEST(ScaleToUnit, RoundTripOnRandomDomains) {
  SeededRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t s = 1 + rng.below(6);
    Point lo(static_cast<Eigen::Index>(s)), hi(static_cast<Eigen::Index>(s));
    for (std::size_t k = 0; k < s; ++k) {
      lo[static_cast<Eigen::Index>(k)] = rng.uniform(-100.0, 100.0);
      hi[static_cast<Eigen::Index>(k)] = lo[static_cast<Eigen::Index>(k)] + rng.uniform(1e-3, 50.0);
    }
    const Domain d(lo, hi);
    for (int i = 0; i < 1000; ++i) {
      Point u(static_cast<Eigen::Index>(s));
      for (auto& v : u) v = rng.uniform();
      const Point back = scale_to_unit(scale_from_unit(u, d), d);
      EXPECT_LE((back - u).lpNorm<Eigen::Infinity>(), 1e-12);
    }
  }
}

TEST(Design, RejectsDuplicatesWithinTolerance) {
  Design d(Domain::cube(2, 0.0, 10.0));
  d.add(pt({1.0, 1.0}), 3.0, Origin::initial);
  EXPECT_THROW(d.add(pt({1.0 + 5e-8, 1.0}), 2.0, Origin::argmax), DuplicatePoint);  // 5e-9 in unit scale
  EXPECT_EQ(d.size(), 1u);
  d.add(pt({1.0 + 2e-7, 1.0}), 2.0, Origin::argmax);  // 2e-8 in unit scale
  EXPECT_EQ(d.size(), 2u);
}

TEST(Design, RejectsOutOfDomainAndNonFinite) {
  Design d(Domain::unit(1));
  EXPECT_THROW(d.add(pt({1.5}), 0.0, Origin::initial), OutOfDomain);
  EXPECT_THROW(d.add(pt({0.5}), std::nan(""), Origin::initial), Error);
  EXPECT_TRUE(d.empty());
}

TEST(Design, BestTracksMinimum) {
  Design d(Domain::unit(1));
  SeededRng rng(3);
  double expected = INFINITY;
  for (int i = 0; i < 50; ++i) {
    const double y = rng.uniform(-5.0, 5.0);
    d.add(pt({(i + 0.5) / 50.0}), y, Origin::initial);
    expected = std::min(expected, y);
    EXPECT_EQ(d.best(), expected);
    EXPECT_EQ(d.response(d.best_index()), expected);
  }
}

TEST(Objective, IndependentCountersSameValues) {
  auto fn = [](const Point& x) { return x.squaredNorm(); };
  Objective a(fn), b(fn);
  const Point x = pt({1.0, 2.0});
  EXPECT_EQ(a(x), b(x));
  a(x);
  EXPECT_EQ(a.evaluations(), 2u);
  EXPECT_EQ(b.evaluations(), 1u);
  const std::vector<Point> xs{x, pt({0.0, 0.0})};
  const auto ys = b.evaluate(xs);
  EXPECT_EQ(ys, (std::vector<double>{5.0, 0.0}));
  EXPECT_EQ(b.evaluations(), 3u);
}

TEST(Objective, FailedEvaluationsStillCount) {
  Objective f([](const Point&) -> double { throw std::runtime_error("boom"); });
  EXPECT_THROW(f(pt({0.0})), std::runtime_error);
  const std::vector<Point> xs{pt({0.0}), pt({1.0}), pt({2.0})};
  EXPECT_THROW(f.evaluate(xs), std::runtime_error);
  EXPECT_EQ(f.evaluations(), 4u);
}

TEST(SeededRng, SameSeedSameStream) {
  SeededRng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(SeededRng, SplitDependsOnlyOnSeedAndKey) {
  SeededRng a(5);
  const SeededRng before = a.split(9);
  for (int i = 0; i < 10; ++i) a.next();
  SeededRng after = a.split(9);
  SeededRng copy = before;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(copy.next(), after.next());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t k = 0; k < 64; ++k) firsts.insert(a.split(k).next());
  EXPECT_EQ(firsts.size(), 64u);
}

TEST(SeededRng, UniformAndBelowRanges) {
  SeededRng r(1);
  std::array<int, 7> counts{};
  for (int i = 0; i < 70000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[r.below(7)];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_THROW(r.below(0), Error);
}
