#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <aego/qmc.hpp>

#include "data/sobol_reference.hpp"
#include "support.hpp"

using namespace aego;
using test_support::pt;

TEST(Sobol, MatchesReferenceGenerator) {
  const SobolSequence seq(1024);
  const double scale = std::ldexp(1.0, sobol_reference::kBits);
  for (std::size_t i = 1; i < sobol_reference::kGrayRows.size(); ++i) {
    const Eigen::VectorXd x = seq.at(i ^ (i >> 1));
    for (std::size_t c = 0; c < sobol_reference::kColumns.size(); ++c) {
      EXPECT_EQ(x[sobol_reference::kColumns[c]], sobol_reference::kGrayRows[i][c] / scale)
          << "row " << i << " column " << sobol_reference::kColumns[c];
    }
  }
}

TEST(Sobol, FirstPointsAfterSkip) {
  const CandidatePool one = sobol_pool(1, Domain::unit(2));
  EXPECT_EQ(one.point(0), pt({0.5, 0.5}));
  const CandidatePool four = sobol_pool(4, Domain::unit(1));
  EXPECT_EQ(four.points.col(0), pt({0.5, 0.25, 0.75, 0.125}));
  EXPECT_EQ(four.generator, PoolGenerator::sobol);
}

TEST(Sobol, LowerStarDiscrepancyThanRandom) {
  const CandidatePool pool = sobol_pool(64, Domain::unit(2));
  const double sobol = test_support::star_discrepancy_2d(pool.points);
  SeededRng rng(2024);
  double mean = 0.0;
  for (int r = 0; r < 100; ++r) {
    Eigen::MatrixXd U(64, 2);
    for (Eigen::Index i = 0; i < U.size(); ++i) U.data()[i] = rng.uniform();
    mean += test_support::star_discrepancy_2d(U) / 100.0;
  }
  EXPECT_LT(sobol, mean);
}

TEST(Sobol, PrefixProperty) {
  const Domain d(pt({-5.0, 0.0, 1.0}), pt({10.0, 15.0, 2.0}));
  const CandidatePool small = sobol_pool(37, d), big = sobol_pool(200, d);
  EXPECT_EQ(small.points, big.points.topRows(37));
  for (std::size_t i = 0; i < big.size(); ++i) EXPECT_TRUE(d.contains(big.point(i)));
}

TEST(Sobol, DimensionLimits) {
  EXPECT_THROW(SobolSequence(0), DimensionUnsupported);
  EXPECT_THROW(SobolSequence(1025), DimensionUnsupported);
  EXPECT_NO_THROW(SobolSequence(21));
  EXPECT_THROW(sobol_pool(0, Domain::unit(2)), Error);
}

TEST(PoolSize, DefaultsAndClamp) {
  EXPECT_EQ(default_pool_size(2), 150u);
  EXPECT_EQ(clamp_pool_size(20, 2), 100u);
  EXPECT_EQ(clamp_pool_size(500, 2), 200u);
  EXPECT_EQ(clamp_pool_size(120, 2), 120u);
}

TEST(LatinHypercube, OnePointPerStratum1D) {
  SeededRng rng(1);
  const CandidatePool p = lhs_initial_design(3, Domain::unit(1), rng);
  std::vector<int> strata;
  for (std::size_t i = 0; i < 3; ++i) strata.push_back(static_cast<int>(std::floor(p.points(static_cast<Eigen::Index>(i), 0) * 3)));
  std::sort(strata.begin(), strata.end());
  EXPECT_EQ(strata, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(p.generator, PoolGenerator::lhs);
}

TEST(LatinHypercube, LatinProjectionsIn2D) {
  const Domain d(pt({-5.0, 0.0}), pt({10.0, 15.0}));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SeededRng rng(seed);
    const CandidatePool p = lhs_initial_design(21, d, rng);
    for (Eigen::Index k = 0; k < 2; ++k) {
      std::vector<int> strata;
      for (Eigen::Index i = 0; i < 21; ++i) {
        const double u = (p.points(i, k) - d.lower()[k]) / d.width()[k];
        strata.push_back(std::min(20, static_cast<int>(std::floor(u * 21))));
      }
      std::sort(strata.begin(), strata.end());
      for (int i = 0; i < 21; ++i) EXPECT_EQ(strata[static_cast<std::size_t>(i)], i);
    }
  }
}

TEST(LatinHypercube, SwapsNeverReduceMinimumDistance) {
  auto min_dist = [](const Eigen::MatrixXd& P) {
    double m = INFINITY;
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      for (Eigen::Index j = 0; j < i; ++j) m = std::min(m, (P.row(i) - P.row(j)).norm());
    }
    return m;
  };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    double prev = 0.0;
    for (std::size_t iters : {0, 10, 100, 1000, 4000}) {
      SeededRng rng(seed);
      const double d = min_dist(lhs_initial_design(15, Domain::unit(3), rng, {iters}).points);
      EXPECT_GE(d, prev) << "seed " << seed << " iterations " << iters;
      prev = d;
    }
  }
}

TEST(LatinHypercube, SeededDeterminism) {
  SeededRng a(4), b(4);
  EXPECT_EQ(lhs_initial_design(10, Domain::unit(4), a).points, lhs_initial_design(10, Domain::unit(4), b).points);
  EXPECT_THROW(lhs_initial_design(1, Domain::unit(2), a), Error);
}

TEST(RandomShift, ThreeCaseWrap) {
  EXPECT_EQ(wrap_coordinate(1.5 + 1.0, -2.0, 2.0), -1.5);
  EXPECT_EQ(wrap_coordinate(0.0 + 1.0, -2.0, 2.0), 1.0);
  EXPECT_EQ(wrap_coordinate(-0.5, 0.0, 1.0), 0.5);
  EXPECT_EQ(wrap_coordinate(2.0, -2.0, 2.0), 2.0);
  EXPECT_EQ(wrap_coordinate(-2.0, -2.0, 2.0), -2.0);
}

TEST(RandomShift, ClosureAndRecordedShift) {
  const Domain d(pt({-5.0, 0.0, -1.0}), pt({10.0, 15.0, 1.0}));
  const CandidatePool pool = sobol_pool(150, d);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SeededRng rng(seed);
    const ShiftedPool s = random_shift(pool, d, rng);
    ASSERT_EQ(s.size(), pool.size());
    ASSERT_TRUE(d.contains(s.shift));
    for (std::size_t i = 0; i < s.size(); ++i) ASSERT_TRUE(d.contains(s.point(i)));
    EXPECT_EQ(s.points, shift_and_wrap(pool.points, d, s.shift - d.lower()));
  }
}

TEST(RandomShift, ShiftAtLowerCornerIsIdentity) {
  const Domain d(pt({-2.0, 3.0}), pt({2.0, 4.0}));
  const CandidatePool pool = sobol_pool(50, d);
  EXPECT_EQ(shift_and_wrap(pool.points, d, d.lower() - d.lower()), pool.points);
}

TEST(RandomShift, PreservesDifferencesModuloPeriod) {
  const Domain d(pt({-2.0, 0.0}), pt({2.0, 1.0}));
  const CandidatePool pool = sobol_pool(40, d);
  SeededRng rng(12);
  const ShiftedPool s = random_shift(pool, d, rng);
  for (Eigen::Index k = 0; k < 2; ++k) {
    const double period = d.width()[k];
    for (Eigen::Index i = 0; i < 40; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        const double before = pool.points(i, k) - pool.points(j, k);
        const double after = s.points(i, k) - s.points(j, k);
        const double r = std::remainder(after - before, period);
        EXPECT_LE(std::abs(r), 1e-12);
      }
    }
  }
}

TEST(RandomShift, GridShiftIsPermutation) {
  const int m = 8;
  const Domain unit = Domain::unit(1);
  Eigen::MatrixXd grid(m, 1);
  for (int i = 1; i <= m; ++i) grid(i - 1, 0) = static_cast<double>(i) / m;
  std::vector<double> original(grid.data(), grid.data() + m);
  for (int j = 0; j < m; ++j) {
    const Eigen::MatrixXd out = shift_and_wrap(grid, unit, pt({static_cast<double>(j) / m}));
    std::vector<double> got(out.data(), out.data() + m);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, original) << "shift " << j << "/" << m;
  }
}

TEST(PoolCsv, RoundTripIsExact) {
  const Domain d(pt({-5.0, 0.0}), pt({10.0, 15.0}));
  SeededRng rng(3);
  const ShiftedPool s = random_shift(sobol_pool(30, d), d, rng);
  std::stringstream ss;
  ss << "# comment line\n";
  write_pool_csv(ss, s.points);
  EXPECT_EQ(read_pool_csv(ss), s.points);
}

TEST(PoolCsv, RejectsRaggedAndOutOfDomain) {
  std::stringstream ragged("0.1,0.2\n0.3\n");
  EXPECT_THROW(read_pool_csv(ragged), Error);
  const auto path = std::filesystem::temp_directory_path() / "aego_pool_test.csv";
  write_pool_csv(path.string(), (Eigen::MatrixXd(2, 2) << 0.1, 0.2, 0.3, 1.5).finished());
  EXPECT_THROW(read_pool_csv(path.string(), Domain::unit(2)), OutOfDomain);
  EXPECT_EQ(read_pool_csv(path.string(), Domain::cube(2, 0.0, 2.0)).generator, PoolGenerator::external);
  std::filesystem::remove(path);
}
