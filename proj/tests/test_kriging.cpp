#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <aego/kriging.hpp>

#include "support.hpp"

using namespace aego;
using test_support::make_design;
using test_support::pt;

namespace {

Design random_design(SeededRng& rng, std::size_t s, std::size_t n) {
  const Domain d = Domain::cube(s, -2.0, 3.0);
  Design out(d);
  Eigen::VectorXd freq(static_cast<Eigen::Index>(s));
  for (auto& f : freq) f = rng.uniform(0.5, 2.0);
  while (out.size() < n) {
    Point x(static_cast<Eigen::Index>(s));
    for (auto& v : x) v = rng.uniform(-2.0, 3.0);
    if (out.is_duplicate(x)) continue;
    out.add(x, std::sin(x.dot(freq)) + 0.1 * x.squaredNorm(), Origin::initial);
  }
  return out;
}

Kernel gaussian(std::initializer_list<double> theta, double nugget = kJitterStart) {
  return {KernelFamily::gaussian, pt(theta), nugget};
}

}  // namespace

TEST(KrigingFit, ConstantDataUsesVarianceFloor) {
  const Design d = make_design(Domain::unit(1), {pt({0.0}), pt({1.0})}, {0.0, 0.0});
  SeededRng rng(1);
  const auto m = KrigingModel::fit(d, rng);
  EXPECT_EQ(m.beta(), 0.0);
  EXPECT_DOUBLE_EQ(m.sigma2(), 1e-12);
  const auto p = m.predict(pt({0.3}));
  EXPECT_TRUE(std::isfinite(p.mean));
  EXPECT_TRUE(std::isfinite(p.sd));
  EXPECT_NEAR(p.mean, 0.0, 1e-12);
}

TEST(KrigingFit, MatchesGridSearchOracle) {
  const Design d = make_design(Domain::unit(1), {pt({0.0}), pt({0.5}), pt({1.0})}, {1.0, 2.0, 3.0});
  const Eigen::MatrixXd X = d.unit_matrix();
  const Eigen::VectorXd y = d.response_vector();

  double best_ll = -INFINITY, best_g = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double g = -3.0 + 0.1 * i;
    const Eigen::MatrixXd R = test_support::dense_gaussian_R(X, pt({std::pow(10.0, g)}), kJitterStart);
    if (Eigen::LLT<Eigen::MatrixXd>(R).info() != Eigen::Success) continue;
    const double ll = test_support::dense_concentrated_loglik(R, y);
    if (ll > best_ll) {
      best_ll = ll;
      best_g = g;
    }
  }
  SeededRng rng(2);
  const auto m = KrigingModel::fit(d, rng);
  EXPECT_NEAR(std::log10(m.kernel().theta[0]), best_g, 0.1 + 1e-9);
  const double ll_fit = test_support::dense_concentrated_loglik(
      test_support::dense_gaussian_R(X, m.kernel().theta, kJitterStart), y);
  EXPECT_GE(ll_fit, best_ll - 1e-6);
}

TEST(KrigingFit, InterpolatesOnRandomDesigns) {
  SeededRng rng(20240);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t s = 1 + rng.below(4);
    const std::size_t n = 5 + rng.below(21);
    const Design d = random_design(rng, s, n);
    FitOptions opt;
    opt.restarts = 3;
    SeededRng fit_rng = rng.split(static_cast<std::uint64_t>(trial));
    const auto m = KrigingModel::fit(d, fit_rng, opt);
    ASSERT_GT(m.sigma2(), 0.0);
    const Eigen::VectorXd y = d.response_vector();
    const double range = y.maxCoeff() - y.minCoeff();
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = m.predict(d.point(i));
      EXPECT_LE(std::abs(p.mean - y[static_cast<Eigen::Index>(i)]), 1e-6 * range) << "trial " << trial;
      EXPECT_LE(p.sd, 1e-5 * std::sqrt(m.sigma2())) << "trial " << trial;
    }
    for (int k = 0; k < 1000; ++k) {
      Eigen::VectorXd u(static_cast<Eigen::Index>(s));
      for (auto& v : u) v = rng.uniform();
      const auto p = m.predict_unit(u);
      EXPECT_GE(p.sd, 0.0);
      EXPECT_GE(m.raw_variance_unit(u), -1e-9 * m.sigma2());
    }
  }
}

TEST(KrigingFit, FactorReproducesCorrelation) {
  SeededRng rng(8);
  const Design d = random_design(rng, 2, 20);
  const auto m = KrigingModel::fit(d, rng);
  const Eigen::MatrixXd L = m.cholesky_factor();
  const Eigen::MatrixXd R = m.correlation();
  EXPECT_LT((L * L.transpose() - R).cwiseAbs().maxCoeff(), 1e-8 * 20);
  EXPECT_TRUE(R.isApprox(R.transpose(), 0.0));
}

TEST(KrigingFit, SameSeedIsBitIdentical) {
  SeededRng data_rng(9);
  const Design d = random_design(data_rng, 3, 15);
  SeededRng a(77), b(77);
  const auto ma = KrigingModel::fit(d, a);
  const auto mb = KrigingModel::fit(d, b);
  EXPECT_EQ(ma.kernel().theta, mb.kernel().theta);
  EXPECT_EQ(ma.log_likelihood(), mb.log_likelihood());
  const auto pa = ma.predict(pt({0.1, 0.2, 0.3}));
  const auto pb = mb.predict(pt({0.1, 0.2, 0.3}));
  EXPECT_EQ(pa.mean, pb.mean);
  EXPECT_EQ(pa.sd, pb.sd);
}

TEST(KrigingFit, TooFewPoints) {
  const Design d = make_design(Domain::unit(1), {pt({0.5})}, {1.0});
  SeededRng rng(1);
  EXPECT_THROW(KrigingModel::fit(d, rng), TooFewPoints);
}

TEST(KrigingFit, MaternFamilyInterpolates) {
  SeededRng rng(12);
  const Design d = random_design(rng, 2, 15);
  FitOptions opt;
  opt.family = KernelFamily::matern52;
  const auto m = KrigingModel::fit(d, rng, opt);
  EXPECT_EQ(m.kernel().family, KernelFamily::matern52);
  const Eigen::VectorXd y = d.response_vector();
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(m.predict(d.point(i)).mean, y[static_cast<Eigen::Index>(i)], 1e-6 * (y.maxCoeff() - y.minCoeff()));
  }
}

TEST(KrigingPredict, TrainingPointGivesResponseAndZeroSd) {
  const Design d = make_design(Domain::unit(1), {pt({0.1}), pt({0.4}), pt({0.9})}, {2.0, -1.0, 0.5});
  const auto m = KrigingModel::condition(d, gaussian({0.3}));
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto p = m.predict(d.point(i));
    EXPECT_NEAR(p.mean, d.response(i), 1e-9);
    EXPECT_LE(p.sd, 1e-5 * std::sqrt(m.sigma2()));
  }
}

TEST(KrigingPredict, RevertsToTrendFarFromData) {
  const Design d = make_design(Domain::cube(1, 0.0, 10.0), {pt({0.0}), pt({0.1}), pt({0.3})}, {1.0, 2.0, 0.0});
  const auto m = KrigingModel::condition(d, gaussian({0.001}));
  const auto p = m.predict(pt({10.0}));
  EXPECT_NEAR(p.mean, m.beta(), 1e-12);
  EXPECT_GE(p.sd, std::sqrt(m.sigma2()));
}

TEST(KrigingPredict, MidpointOfTwoPointsIsMeanResponse) {
  const Design d = make_design(Domain::unit(1), {pt({0.2}), pt({0.8})}, {1.0, 4.0});
  for (double theta : {0.05, 0.3, 2.0}) {
    const auto m = KrigingModel::condition(d, gaussian({theta}));
    EXPECT_NEAR(m.predict(pt({0.5})).mean, 2.5, 1e-10) << theta;
  }
}

TEST(KrigingPredict, InvariantUnderRowOrder) {
  SeededRng rng(31);
  const Design d = random_design(rng, 2, 12);
  std::vector<std::size_t> order(d.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order.begin(), order.end());
  Design shuffled(d.domain());
  for (auto i : order) shuffled.add(d.point(i), d.response(i), Origin::initial);

  const Kernel k = gaussian({0.4, 0.7});
  const auto a = KrigingModel::condition(d, k);
  const auto b = KrigingModel::condition(shuffled, k);
  EXPECT_NEAR(log_likelihood(d, k), log_likelihood(shuffled, k), 1e-10);
  for (int i = 0; i < 100; ++i) {
    const Point x = pt({rng.uniform(-2.0, 3.0), rng.uniform(-2.0, 3.0)});
    EXPECT_NEAR(a.predict(x).mean, b.predict(x).mean, 1e-8);
    EXPECT_NEAR(a.predict(x).sd, b.predict(x).sd, 1e-8);
  }
}

TEST(KrigingModelJson, RoundTripReproducesPredictions) {
  SeededRng rng(41);
  const Design d = random_design(rng, 3, 18);
  const auto m = KrigingModel::fit(d, rng);
  const auto back = KrigingModel::from_json(nlohmann::json::parse(m.to_json().dump()));
  for (int i = 0; i < 200; ++i) {
    const Point x = pt({rng.uniform(-2.0, 3.0), rng.uniform(-2.0, 3.0), rng.uniform(-2.0, 3.0)});
    EXPECT_NEAR(m.predict(x).mean, back.predict(x).mean, 1e-10);
    EXPECT_NEAR(m.predict(x).sd, back.predict(x).sd, 1e-10);
  }
}

TEST(LogLikelihood, TwoPointClosedForm) {
  const double eta = 1e-3;
  const double theta = 0.7, x0 = 0.1, x1 = 0.6, y0 = -0.4, y1 = 1.3;
  const Eigen::MatrixXd X = (Eigen::MatrixXd(2, 1) << x0, x1).finished();
  const Eigen::VectorXd y = pt({y0, y1});
  const double r = std::exp(-std::pow((x1 - x0) / theta, 2));
  const double a = 1.0 + eta;
  const double det = a * a - r * r;
  // R^{-1} = [a, -r; -r, a] / det
  const double one_Ri_one = (2.0 * a - 2.0 * r) / det;
  const double one_Ri_y = ((a - r) * y0 + (a - r) * y1) / det;
  const double beta = one_Ri_y / one_Ri_one;
  const double e0 = y0 - beta, e1 = y1 - beta;
  const double sigma2 = (a * e0 * e0 - 2.0 * r * e0 * e1 + a * e1 * e1) / det / 2.0;
  const double expected = -(std::log(2.0 * std::numbers::pi * sigma2) + 1.0) - 0.5 * std::log(det);

  EXPECT_NEAR(concentrated_log_likelihood(X, y, gaussian({theta}, eta)), expected, 1e-10);
}

TEST(LogLikelihood, MatchesDenseEvaluation) {
  SeededRng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t s = 1 + rng.below(3);
    const std::size_t n = 3 + rng.below(18);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(s));
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform();
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(s));
    for (auto& t : theta) t = std::pow(10.0, rng.uniform(-1.5, -0.3));
    const Kernel k{KernelFamily::gaussian, theta, 1e-6};
    const double dense = test_support::dense_concentrated_loglik(test_support::dense_gaussian_R(X, theta, 1e-6), y);
    EXPECT_NEAR(concentrated_log_likelihood(X, y, k), dense, 1e-8 * std::max(1.0, std::abs(dense))) << trial;
  }
}

TEST(LogLikelihood, StrongTrendPrefersInteriorOverExtremes) {
  std::vector<Point> xs;
  std::vector<double> ys;
  for (int i = 0; i < 8; ++i) {
    xs.push_back(pt({i / 7.0}));
    ys.push_back(10.0 * i / 7.0);
  }
  const Design d = make_design(Domain::unit(1), xs, ys);
  double best = -INFINITY;
  for (int i = 0; i <= 60; ++i) {
    try {
      best = std::max(best, log_likelihood(d, gaussian({std::pow(10.0, -3.0 + 0.1 * i)})));
    } catch (const SingularCorrelation&) {
    }
  }
  EXPECT_GE(best, log_likelihood(d, gaussian({kThetaMin})));
  EXPECT_GE(best, log_likelihood(d, gaussian({kThetaMax}, 1e-4)));
}

TEST(LogLikelihood, SingularWithoutJitterThrows) {
  const Eigen::MatrixXd X = (Eigen::MatrixXd(2, 1) << 0.3, 0.3).finished();
  EXPECT_THROW(concentrated_log_likelihood(X, pt({1.0, 2.0}), gaussian({0.5}, 0.0)), SingularCorrelation);
}

TEST(KernelFamily, StringRoundTrip) {
  EXPECT_EQ(kernel_family_from_string(to_string(KernelFamily::gaussian)), KernelFamily::gaussian);
  EXPECT_EQ(kernel_family_from_string(to_string(KernelFamily::matern52)), KernelFamily::matern52);
  EXPECT_THROW(kernel_family_from_string("cubic"), Error);
}

TEST(Kernel, SymmetricBoundedWithNuggetAtZero) {
  SeededRng rng(3);
  for (auto fam : {KernelFamily::gaussian, KernelFamily::matern52}) {
    const Kernel k{fam, pt({0.3, 0.9}), 1e-6};
    for (int i = 0; i < 200; ++i) {
      const Eigen::VectorXd a = pt({rng.uniform(), rng.uniform()}), b = pt({rng.uniform(), rng.uniform()});
      EXPECT_EQ(k(a, b), k(b, a));
      EXPECT_LE(std::abs(k(a, b)), 1.0 + k.nugget);
      EXPECT_EQ(k(a, a), 1.0 + k.nugget);
    }
  }
}
