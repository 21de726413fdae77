#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include <aego/core.hpp>

namespace test_support {

inline aego::Point pt(std::initializer_list<double> v) {
  aego::Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) p[i++] = c;
  return p;
}

inline aego::Design make_design(const aego::Domain& d, const std::vector<aego::Point>& xs, const std::vector<double>& ys) {
  aego::Design out(d);
  for (std::size_t i = 0; i < xs.size(); ++i) out.add(xs[i], ys[i], aego::Origin::initial);
  return out;
}

/// Gaussian correlation written out directly, with `eta` added on the diagonal.
inline Eigen::MatrixXd dense_gaussian_R(const Eigen::MatrixXd& X, const Eigen::VectorXd& theta, double eta) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < X.cols(); ++k) {
        const double t = (X(i, k) - X(j, k)) / theta[k];
        s += t * t;
      }
      R(i, j) = std::exp(-s);
    }
    R(i, i) += eta;
  }
  return R;
}

/// Concentrated log-likelihood of a constant-trend model using an explicit
/// inverse and LU determinant; shares no code with the library.
inline double dense_concentrated_loglik(const Eigen::MatrixXd& R, const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  const Eigen::MatrixXd Ri = lu.inverse();
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
  const double beta = one.dot(Ri * y) / one.dot(Ri * one);
  const Eigen::VectorXd r = y - beta * one;
  const double sigma2 = r.dot(Ri * r) / static_cast<double>(n);
  const double logdet = std::log(std::abs(lu.determinant()));
  return -0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0) - 0.5 * logdet;
}

/// Exact star discrepancy of a 2-D point set in [0,1]^2, by enumerating all
/// critical boxes [0,a) x [0,b) with a, b drawn from the coordinates and 1.
inline double star_discrepancy_2d(const Eigen::MatrixXd& U) {
  const Eigen::Index m = U.rows();
  std::vector<double> xs{1.0}, ys{1.0};
  for (Eigen::Index i = 0; i < m; ++i) {
    xs.push_back(U(i, 0));
    ys.push_back(U(i, 1));
  }
  double worst = 0.0;
  for (double a : xs) {
    for (double b : ys) {
      std::size_t open = 0, closed = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (U(i, 0) < a && U(i, 1) < b) ++open;
        if (U(i, 0) <= a && U(i, 1) <= b) ++closed;
      }
      const double vol = a * b;
      worst = std::max(worst, std::abs(static_cast<double>(open) / m - vol));
      worst = std::max(worst, std::abs(static_cast<double>(closed) / m - vol));
    }
  }
  return worst;
}

}  // namespace test_support
