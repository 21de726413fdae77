#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "core.hpp"
#include "simplex.hpp"

namespace aego {

class SingularCorrelation : public Error {
 public:
  using Error::Error;
};

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

enum class KernelFamily { gaussian, matern52 };

inline const char* to_string(KernelFamily f) { return f == KernelFamily::gaussian ? "gaussian" : "matern52"; }

inline KernelFamily kernel_family_from_string(const std::string& s) {
  if (s == "gaussian") return KernelFamily::gaussian;
  if (s == "matern52") return KernelFamily::matern52;
  throw Error("unknown kernel family '" + s + "'");
}

// Lengthscale bounds, unit-scaled coordinates.
inline constexpr double kThetaMin = 1e-3;
inline constexpr double kThetaMax = 1e3;

inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterMax = 1e-4;

/// Anisotropic stationary correlation with a diagonal nugget. The nugget only
/// enters at zero distance, so r(x, x) = 1 + nugget.
struct Kernel {
  KernelFamily family = KernelFamily::gaussian;
  Eigen::VectorXd theta;
  double nugget = kJitterStart;

  /// Correlation as a function of the scaled squared distance sum_k (d_k / theta_k)^2.
  double from_scaled_sq(double q) const {
    if (family == KernelFamily::gaussian) return std::exp(-q);
    const double r = std::sqrt(5.0 * q);
    return (1.0 + r + r * r / 3.0) * std::exp(-r);
  }

  double scaled_sq(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return ((a - b).array() / theta.array()).square().sum();
  }

  double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    const double q = scaled_sq(a, b);
    return q == 0.0 ? 1.0 + nugget : from_scaled_sq(q);
  }
};

/// n x n correlation matrix of the rows of X, nugget on the diagonal.
inline Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& X, const Kernel& k) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    R(i, i) = 1.0 + k.nugget;
    for (Eigen::Index j = 0; j < i; ++j) {
      R(i, j) = R(j, i) = k(X.row(i).transpose(), X.row(j).transpose());
    }
  }
  return R;
}

struct Prediction {
  double mean;
  double sd;
};

namespace detail {

struct Profile {
  double log_likelihood;
  double beta;
  double sigma2;
  double log_det;
};

inline double sigma2_floor(const Eigen::VectorXd& y) {
  const double range = y.maxCoeff() - y.minCoeff();
  return range > 0.0 ? 1e-12 * range * range : 1e-12;
}

/// Closed-form GLS trend and process variance given a factorized R.
inline Profile profile_from_factor(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd rinv_one = llt.solve(ones);
  const Eigen::VectorXd rinv_y = llt.solve(y);
  const double beta = ones.dot(rinv_y) / ones.dot(rinv_one);
  const Eigen::VectorXd resid = y - beta * ones;
  const double quad = resid.dot(llt.solve(resid));
  const double sigma2 = std::max(quad / static_cast<double>(n), sigma2_floor(y));
  const auto& L = llt.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(L(i, i));
  const double nd = static_cast<double>(n);
  const double ll = -0.5 * nd * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0) - 0.5 * log_det;
  return {ll, beta, sigma2, log_det};
}

inline std::pair<double, double> standardization(const Eigen::VectorXd& y) {
  const double mean = y.mean();
  double sd = std::sqrt((y.array() - mean).square().mean());
  if (!(sd > 0.0) || !std::isfinite(sd)) sd = 1.0;
  return {mean, sd};
}

/// Per-dimension squared coordinate differences, reused across likelihood evaluations.
class PairwiseSquares {
 public:
  explicit PairwiseSquares(const Eigen::MatrixXd& X) : n_(X.rows()), dim_(X.cols()) {
    const Eigen::Index pairs = n_ * (n_ - 1) / 2;
    sq_.resize(pairs, dim_);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j < i; ++j, ++p) {
        sq_.row(p) = (X.row(i) - X.row(j)).array().square();
      }
    }
  }

  Eigen::MatrixXd correlation(const Kernel& k) const {
    const Eigen::VectorXd inv_t2 = k.theta.array().square().inverse();
    const Eigen::VectorXd q = sq_ * inv_t2;
    Eigen::MatrixXd R(n_, n_);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      R(i, i) = 1.0 + k.nugget;
      for (Eigen::Index j = 0; j < i; ++j, ++p) {
        R(i, j) = R(j, i) = q[p] == 0.0 ? 1.0 + k.nugget : k.from_scaled_sq(q[p]);
      }
    }
    return R;
  }

 private:
  Eigen::Index n_;
  Eigen::Index dim_;
  Eigen::MatrixXd sq_;
};

/// Factorizes R + (eta - nugget) I, escalating eta by x10 from `start` until
/// the Cholesky succeeds. Returns the nugget used, or nullopt when exhausted.
inline std::optional<double> factor_with_jitter(Eigen::MatrixXd R, double nugget_in_R, double start,
                                                Eigen::LLT<Eigen::MatrixXd>& llt) {
  double eta = std::max(start, kJitterStart);
  R.diagonal().array() += eta - nugget_in_R;
  for (;;) {
    llt.compute(R);
    if (llt.info() == Eigen::Success) {
      const auto& L = llt.matrixLLT();
      if (L.diagonal().allFinite() && L.diagonal().minCoeff() > 0.0) return eta;
    }
    if (eta * 10.0 > kJitterMax * (1.0 + 1e-9)) return std::nullopt;
    R.diagonal().array() += 9.0 * eta;
    eta *= 10.0;
  }
}

}  // namespace detail

/// Concentrated log-likelihood of y given unit-scaled inputs X and a kernel,
/// with beta and sigma^2 profiled out. Uses the kernel's nugget as given.
inline double concentrated_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Kernel& k) {
  Eigen::LLT<Eigen::MatrixXd> llt(correlation_matrix(X, k));
  if (llt.info() != Eigen::Success) throw SingularCorrelation("correlation matrix is not positive definite");
  return detail::profile_from_factor(llt, y).log_likelihood;
}

/// Likelihood of a design under the same input scaling and response
/// standardization the fitter uses.
inline double log_likelihood(const Design& design, const Kernel& k) {
  const Eigen::VectorXd y = design.response_vector();
  const auto [mean, scale] = detail::standardization(y);
  return concentrated_log_likelihood(design.unit_matrix(), ((y.array() - mean) / scale).matrix(), k);
}

struct FitOptions {
  KernelFamily family = KernelFamily::gaussian;
  std::size_t restarts = 10;
  std::size_t max_evaluations_per_start = 0;  // 0: 100 + 50 * dim
  std::optional<Eigen::VectorXd> warm_start;  // extra start, as lengthscales
};

/// Ordinary Kriging (constant trend) fitted to a design. Immutable.
class KrigingModel {
 public:
  /// Conditions on the design with fixed kernel lengthscales. The nugget
  /// starts at kernel.nugget and escalates on factorization failure.
  static KrigingModel condition(const Design& design, Kernel kernel) {
    if (design.size() < 2) throw TooFewPoints("kriging needs at least 2 design points");
    if (static_cast<std::size_t>(kernel.theta.size()) != design.dim()) {
      throw DimensionMismatch("kernel lengthscale count does not match design dimension");
    }
    KrigingModel m(design.domain());
    m.X_ = design.unit_matrix();
    m.y_ = design.response_vector();
    std::tie(m.y_mean_, m.y_scale_) = detail::standardization(m.y_);
    const Eigen::VectorXd ys = (m.y_.array() - m.y_mean_) / m.y_scale_;
    const double requested = kernel.nugget;
    kernel.nugget = 0.0;
    Eigen::MatrixXd R = correlation_matrix(m.X_, kernel);
    const auto eta = detail::factor_with_jitter(std::move(R), 0.0, requested, m.llt_);
    if (!eta) throw SingularCorrelation("correlation matrix singular after jitter escalation");
    kernel.nugget = *eta;
    m.kernel_ = std::move(kernel);
    m.finish(ys);
    return m;
  }

  static KrigingModel fit(const Design& design, SeededRng& rng, const FitOptions& opt = {}) {
    if (design.size() < 2) throw TooFewPoints("kriging needs at least 2 design points");
    const Eigen::MatrixXd X = design.unit_matrix();
    const Eigen::VectorXd y = design.response_vector();
    const auto [mean, scale] = detail::standardization(y);
    const Eigen::VectorXd ys = (y.array() - mean) / scale;
    const Eigen::Index dim = X.cols();
    const detail::PairwiseSquares squares(X);

    Kernel trial{opt.family, Eigen::VectorXd(dim), 0.0};
    Eigen::LLT<Eigen::MatrixXd> llt;
    auto neg_ll = [&](const Eigen::VectorXd& log_theta) {
      trial.theta = log_theta.unaryExpr([](double v) { return std::pow(10.0, v); });
      // Reject lengthscales that need more than the base jitter.
      trial.nugget = kJitterStart;
      llt.compute(squares.correlation(trial));
      if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().minCoeff() > 0.0)) {
        return std::numeric_limits<double>::infinity();
      }
      return -detail::profile_from_factor(llt, ys).log_likelihood;
    };

    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim, std::log10(kThetaMin));
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim, std::log10(kThetaMax));
    SimplexOptions sopt;
    sopt.initial_step = 0.1;
    sopt.max_evaluations = opt.max_evaluations_per_start ? opt.max_evaluations_per_start
                                                         : 100 + 50 * static_cast<std::size_t>(dim);
    sopt.f_tolerance = 1e-9;
    sopt.x_tolerance = 1e-4;

    // Latin-hypercube starts over the log-lengthscale box.
    const std::size_t restarts = std::max<std::size_t>(opt.restarts, 1);
    std::vector<Eigen::VectorXd> starts(restarts, Eigen::VectorXd(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
      std::vector<std::size_t> perm(restarts);
      for (std::size_t i = 0; i < restarts; ++i) perm[i] = i;
      rng.shuffle(perm.begin(), perm.end());
      for (std::size_t i = 0; i < restarts; ++i) {
        const double u = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(restarts);
        starts[i][k] = lo[k] + u * (hi[k] - lo[k]);
      }
    }
    if (opt.warm_start && opt.warm_start->size() == dim) {
      starts.insert(starts.begin(), opt.warm_start->unaryExpr([](double t) {
        return std::log10(std::clamp(t, kThetaMin, kThetaMax));
      }));
    }

    SimplexResult best;
    for (const auto& s : starts) {
      SimplexResult r = minimize_simplex(neg_ll, s, lo, hi, sopt);
      if (r.value < best.value) best = std::move(r);
    }
    if (!std::isfinite(best.value)) throw SingularCorrelation("no lengthscale gave a factorizable correlation matrix");

    Kernel k{opt.family, best.x.unaryExpr([](double v) { return std::pow(10.0, v); }), kJitterStart};
    return condition(design, std::move(k));
  }

  Prediction predict(const Point& x) const { return predict_unit(scale_to_unit(x, domain_)); }

  Prediction predict_unit(const Eigen::VectorXd& u) const {
    const Eigen::VectorXd r = cross(u);
    const double mean_s = beta_s_ + r.dot(alpha_);
    return {y_mean_ + y_scale_ * mean_s, std::sqrt(std::max(variance_from_cross(u, r), 0.0))};
  }

  /// Predictive variance in response units before negative values are clipped.
  double raw_variance_unit(const Eigen::VectorXd& u) const { return variance_from_cross(u, cross(u)); }

  /// Vectorized prediction for the rows of U (unit-scaled).
  void predict_unit_batch(const Eigen::MatrixXd& U, Eigen::VectorXd& mean, Eigen::VectorXd& sd) const {
    const Eigen::Index m = U.rows(), n = X_.rows();
    Eigen::MatrixXd Rx(n, m);
    Eigen::VectorXd c0 = Eigen::VectorXd::Ones(m);
    const Eigen::ArrayXd inv_t2 = kernel_.theta.array().square().inverse();
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double q = ((X_.row(i) - U.row(j)).array().square().transpose() * inv_t2).sum();
        if (q == 0.0) {
          Rx(i, j) = 1.0 + kernel_.nugget;
          c0[j] = 1.0 + kernel_.nugget;
        } else {
          Rx(i, j) = kernel_.from_scaled_sq(q);
        }
      }
    }
    mean = (y_mean_ + y_scale_ * beta_s_) + (y_scale_ * (Rx.transpose() * alpha_)).array();
    llt_.matrixL().solveInPlace(Rx);
    sd.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double t = 1.0 - u_.dot(Rx.col(j));
      const double s2 = sigma2_ * (c0[j] - Rx.col(j).squaredNorm() + t * t / uu_);
      sd[j] = std::sqrt(std::max(s2, 0.0));
    }
  }

  const Domain& domain() const { return domain_; }
  const Kernel& kernel() const { return kernel_; }
  std::size_t size() const { return static_cast<std::size_t>(X_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(X_.cols()); }
  const Eigen::MatrixXd& unit_inputs() const { return X_; }
  const Eigen::VectorXd& responses() const { return y_; }
  double min_response() const { return y_.minCoeff(); }
  /// Trend coefficient in response units.
  double beta() const { return y_mean_ + y_scale_ * beta_s_; }
  /// Process variance in response units.
  double sigma2() const { return sigma2_; }
  double log_likelihood() const { return log_likelihood_; }
  Eigen::MatrixXd cholesky_factor() const { return llt_.matrixL(); }
  Eigen::MatrixXd correlation() const { return correlation_matrix(X_, kernel_); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kernel"] = {{"family", to_string(kernel_.family)},
                   {"theta", std::vector<double>(kernel_.theta.data(), kernel_.theta.data() + kernel_.theta.size())},
                   {"nugget", kernel_.nugget}};
    j["beta"] = beta();
    j["sigma2"] = sigma2_;
    j["domain"] = {{"lower", std::vector<double>(domain_.lower().data(), domain_.lower().data() + dim())},
                   {"upper", std::vector<double>(domain_.upper().data(), domain_.upper().data() + dim())}};
    auto& pts = j["points"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < X_.rows(); ++i) {
      const Point p = scale_from_unit(X_.row(i).transpose(), domain_);
      pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    }
    j["responses"] = std::vector<double>(y_.data(), y_.data() + y_.size());
    return j;
  }

  static KrigingModel from_json(const nlohmann::json& j) {
    auto vec = [](const nlohmann::json& a) {
      const auto v = a.get<std::vector<double>>();
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    Domain domain(vec(j.at("domain").at("lower")), vec(j.at("domain").at("upper")));
    Design design(domain);
    const auto& pts = j.at("points");
    const auto ys = j.at("responses").get<std::vector<double>>();
    if (pts.size() != ys.size()) throw Error("model JSON: points and responses differ in length");
    for (std::size_t i = 0; i < ys.size(); ++i) design.add(vec(pts[i]), ys[i], Origin::initial);
    Kernel k{kernel_family_from_string(j.at("kernel").at("family").get<std::string>()), vec(j.at("kernel").at("theta")),
             j.at("kernel").at("nugget").get<double>()};
    return condition(design, std::move(k));
  }

 private:
  explicit KrigingModel(Domain d) : domain_(std::move(d)) {}

  Eigen::VectorXd cross(const Eigen::VectorXd& u) const {
    Eigen::VectorXd r(X_.rows());
    for (Eigen::Index i = 0; i < X_.rows(); ++i) r[i] = kernel_(X_.row(i).transpose(), u);
    return r;
  }

  double variance_from_cross(const Eigen::VectorXd& u, Eigen::VectorXd v) const {
    llt_.matrixL().solveInPlace(v);
    const double c0 = 1.0 + (min_sq_distance(u) == 0.0 ? kernel_.nugget : 0.0);
    const double t = 1.0 - u_.dot(v);
    return sigma2_ * (c0 - v.squaredNorm() + t * t / uu_);
  }

  double min_sq_distance(const Eigen::VectorXd& u) const {
    return (X_.rowwise() - u.transpose()).rowwise().squaredNorm().minCoeff();
  }

  void finish(const Eigen::VectorXd& ys) {
    const detail::Profile p = detail::profile_from_factor(llt_, ys);
    beta_s_ = p.beta;
    sigma2_ = p.sigma2 * y_scale_ * y_scale_;
    log_likelihood_ = p.log_likelihood;
    const Eigen::VectorXd resid = ys - beta_s_ * Eigen::VectorXd::Ones(ys.size());
    alpha_ = llt_.solve(resid);
    // One step of iterative refinement; R can be badly conditioned for smooth data.
    const Eigen::MatrixXd R = correlation_matrix(X_, kernel_);
    alpha_ += llt_.solve(resid - R * alpha_);
    u_ = Eigen::VectorXd::Ones(ys.size());
    llt_.matrixL().solveInPlace(u_);
    uu_ = u_.squaredNorm();
  }

  Domain domain_;
  Kernel kernel_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double beta_s_ = 0.0;
  double sigma2_ = 0.0;
  double log_likelihood_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // R^{-1} (y_std - beta_std)
  Eigen::VectorXd u_;      // L^{-1} 1
  double uu_ = 0.0;        // 1' R^{-1} 1
};

}  // namespace aego
