#include <gtest/gtest.h>

#include <cmath>

#include <aego/testfns.hpp>

#include "support.hpp"

using namespace aego;
using test_support::pt;

TEST(Catalog, PublishedOptima) {
  struct Case {
    const char* name;
    double minimum;
    double tol;
  };
  for (const Case& c : {Case{"branin", 0.397887, 1e-5}, Case{"goldprice", -3.129126, 1e-5},
                        Case{"hartmann3", -3.86278, 1e-4}, Case{"hartmann6", -3.32237, 1e-4},
                        Case{"trid12", -352.0, 1e-6}, Case{"sixcamel", -1.0316, 1e-4}, Case{"sin2", 0.9, 0.0},
                        Case{"ackley10", 0.0, 1e-12}, Case{"levy10", 0.0, 1e-12}}) {
    const TestFunction f = lookup_function(c.name);
    EXPECT_EQ(f.minimum, c.minimum) << c.name;
    for (const Point& x : f.minimizers) {
      EXPECT_TRUE(f.domain.contains(x)) << c.name;
      EXPECT_NEAR(f(x), c.minimum, c.tol) << c.name;
    }
  }
}

TEST(Catalog, SpotValues) {
  EXPECT_NEAR(lookup_function("branin")(pt({std::numbers::pi, 2.275})), 0.397887, 1e-5);
  EXPECT_NEAR(lookup_function("hartmann6")(pt({0.2017, 0.1500, 0.4769, 0.2753, 0.3117, 0.6573})), -3.32237, 1e-4);
  EXPECT_EQ(lookup_function("sin2")(pt({0.0, 0.0})), 0.9);
  EXPECT_NEAR(lookup_function("goldprice")(pt({0.0, -1.0})), -3.129126, 1e-5);
  for (const char* name : {"ackley2", "ackley10", "ackley_toy"}) {
    const TestFunction f = lookup_function(name);
    EXPECT_NEAR(f(Point::Zero(static_cast<Eigen::Index>(f.dim()))), 0.0, 1e-12) << name;
  }
}

TEST(Catalog, TridFormulaMinimum) {
  for (std::size_t s : {2, 6, 12}) {
    const TestFunction f = lookup_function("trid" + std::to_string(s));
    const double sd = static_cast<double>(s);
    EXPECT_EQ(f.minimum, -sd * (sd + 4.0) * (sd - 1.0) / 6.0);
    EXPECT_NEAR(f(f.minimizers.front()), f.minimum, 1e-6);
    EXPECT_EQ(f.domain.lower()[0], -sd * sd);
  }
  const TestFunction t12 = lookup_function("trid12");
  for (std::size_t i = 1; i <= 12; ++i) EXPECT_EQ(t12.minimizers.front()[static_cast<Eigen::Index>(i - 1)], i * (13 - i));
}

TEST(Catalog, LevyAtOnesIsExactlyZero) {
  for (std::size_t s : {2, 5, 10}) {
    const TestFunction f = lookup_function("levy" + std::to_string(s));
    EXPECT_NEAR(f(Point::Ones(static_cast<Eigen::Index>(s))), 0.0, 1e-12);
    EXPECT_GT(f(Point::Zero(static_cast<Eigen::Index>(s))), 0.0);
  }
}

TEST(Catalog, SixCamelSymmetry) {
  const TestFunction f = lookup_function("sixcamel");
  SeededRng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Point x = pt({rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0)});
    EXPECT_NEAR(f(x), f(-x), 1e-12);
  }
}

TEST(Catalog, BraninMinimizersAgree) {
  const TestFunction f = lookup_function("branin");
  ASSERT_EQ(f.minimizers.size(), 3u);
  for (const auto& a : f.minimizers) {
    for (const auto& b : f.minimizers) EXPECT_NEAR(f(a), f(b), 1e-5);
  }
}

TEST(Catalog, DomainsAndTotality) {
  EXPECT_EQ(lookup_function("branin").domain, Domain(pt({-5.0, 0.0}), pt({10.0, 15.0})));
  EXPECT_EQ(lookup_function("ackley_toy").domain, Domain::cube(2, -2.0, 2.0));
  EXPECT_EQ(lookup_function("hartmann6").domain, Domain::unit(6));
  SeededRng rng(2);
  for (const auto& name : function_names()) {
    const TestFunction f = lookup_function(name);
    for (int i = 0; i < 200; ++i) {
      Point x(static_cast<Eigen::Index>(f.dim()));
      for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = rng.uniform(f.domain.lower()[k], f.domain.upper()[k]);
      ASSERT_TRUE(std::isfinite(f(x))) << name;
    }
    ASSERT_TRUE(std::isfinite(f(f.domain.lower()))) << name;
    ASSERT_TRUE(std::isfinite(f(f.domain.upper()))) << name;
  }
}

TEST(Catalog, UnknownNames) {
  EXPECT_THROW(lookup_function("rosenbrock"), UnknownFunction);
  EXPECT_THROW(lookup_function("ackley"), UnknownFunction);
  EXPECT_THROW(lookup_function("levy1"), UnknownFunction);
  EXPECT_THROW(lookup_function("trid2x"), UnknownFunction);
}
