#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "kriging.hpp"
#include "qmc.hpp"
#include "simplex.hpp"

namespace aego {

inline double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

inline double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

/// Closed-form expected improvement below `best` for a Gaussian prediction.
/// Below sd_eps the deterministic limit max(best - mean, 0) is returned.
inline double expected_improvement(double best, double mean, double sd, double sd_eps = 0.0) {
  const double gap = best - mean;
  if (!(sd > sd_eps) || sd == 0.0) return std::max(gap, 0.0);
  const double u = gap / sd;
  return std::max(gap * normal_cdf(u) + sd * normal_pdf(u), 0.0);
}

/// A fitted model together with the incumbent minimum of its responses. The
/// model must outlive the context.
class EiContext {
 public:
  explicit EiContext(const KrigingModel& model)
      : model_(&model), best_y_(model.min_response()), sd_eps_(1e-10 * std::sqrt(model.sigma2())) {}

  const KrigingModel& model() const { return *model_; }
  double best_y() const { return best_y_; }
  double sd_eps() const { return sd_eps_; }

 private:
  const KrigingModel* model_;
  double best_y_;
  double sd_eps_;
};

inline double ei_unit(const EiContext& ctx, const Eigen::VectorXd& u) {
  const Prediction p = ctx.model().predict_unit(u);
  return expected_improvement(ctx.best_y(), p.mean, p.sd, ctx.sd_eps());
}

inline double ei(const EiContext& ctx, const Point& x) {
  return ei_unit(ctx, scale_to_unit(x, ctx.model().domain()));
}

/// EI for each row of U (unit-scaled coordinates).
inline Eigen::VectorXd ei_batch_unit(const EiContext& ctx, const Eigen::MatrixXd& U) {
  Eigen::VectorXd mean, sd;
  ctx.model().predict_unit_batch(U, mean, sd);
  Eigen::VectorXd out(U.rows());
  for (Eigen::Index i = 0; i < U.rows(); ++i) out[i] = expected_improvement(ctx.best_y(), mean[i], sd[i], ctx.sd_eps());
  return out;
}

inline std::vector<double> ei_batch(const EiContext& ctx, std::span<const Point> xs) {
  if (xs.empty()) return {};
  const Domain& d = ctx.model().domain();
  Eigen::MatrixXd U(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(d.dim()));
  for (std::size_t i = 0; i < xs.size(); ++i) U.row(static_cast<Eigen::Index>(i)) = scale_to_unit(xs[i], d).transpose();
  const Eigen::VectorXd v = ei_batch_unit(ctx, U);
  return {v.data(), v.data() + v.size()};
}

struct MaximizerOptions {
  std::size_t scan_per_dim = 512;
  std::size_t local_starts = 5;
  std::size_t local_evaluations = 0;  // 0: 60 + 40 * dim
  std::size_t candidates_kept = 16;
  bool incumbent_start = true;   // extra local search from the best design point
  double incumbent_step = 1e-3;  // its starting simplex size, unit coordinates
};

struct EiCandidate {
  Point x;  // domain coordinates
  double ei;
};

/// Candidate maximizers of EI, best first: local-search termini plus the top
/// of the scan set, with duplicates of design points and of each other removed.
/// The scan set is a randomly shifted Sobol set of scan_per_dim * s points,
/// plus `extra_scan` (domain coordinates, may be empty).
inline std::vector<EiCandidate> rank_ei_candidates(const EiContext& ctx, SeededRng& rng, const MaximizerOptions& opt = {},
                                                   const Eigen::MatrixXd& extra_scan = {}) {
  const KrigingModel& model = ctx.model();
  const Domain& domain = model.domain();
  const std::size_t s = domain.dim();
  const Domain unit = Domain::unit(s);

  const CandidatePool base = sobol_pool(opt.scan_per_dim * s, unit);
  const ShiftedPool scan = random_shift(base, unit, rng);
  Eigen::MatrixXd U(scan.points.rows() + extra_scan.rows(), static_cast<Eigen::Index>(s));
  U.topRows(scan.points.rows()) = scan.points;
  if (extra_scan.rows() > 0) U.bottomRows(extra_scan.rows()) = domain_to_unit(extra_scan, domain);

  const Eigen::MatrixXd& X = model.unit_inputs();
  auto near_design = [&](const Eigen::VectorXd& u) {
    return ((X.rowwise() - u.transpose()).cwiseAbs().rowwise().maxCoeff().array() < kDuplicateTolerance).any();
  };

  const Eigen::VectorXd scan_ei = ei_batch_unit(ctx, U);
  std::vector<std::size_t> order;
  order.reserve(static_cast<std::size_t>(U.rows()));
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    if (!near_design(U.row(i).transpose())) order.push_back(static_cast<std::size_t>(i));
  }
  // Ties resolved by lowest scan index.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scan_ei[static_cast<Eigen::Index>(a)] > scan_ei[static_cast<Eigen::Index>(b)];
  });

  std::vector<std::pair<Eigen::VectorXd, double>> pool;  // unit coords, EI
  SimplexOptions sopt;
  sopt.initial_step = 0.02;
  sopt.max_evaluations = opt.local_evaluations ? opt.local_evaluations : 60 + 40 * s;
  sopt.f_tolerance = 1e-12;
  sopt.x_tolerance = 1e-7;
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s));
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s));
  const std::size_t starts = std::min(opt.local_starts, order.size());
  auto neg_ei = [&](const Eigen::VectorXd& u) { return -ei_unit(ctx, u); };
  for (std::size_t i = 0; i < starts; ++i) {
    const Eigen::VectorXd u0 = U.row(static_cast<Eigen::Index>(order[i])).transpose();
    const SimplexResult r = minimize_simplex(neg_ei, u0, lo, hi, sopt);
    if (!near_design(r.x)) pool.emplace_back(r.x, -r.value);
  }
  if (opt.incumbent_start && opt.local_starts > 0) {
    // The EI peak next to the incumbent can be far narrower than the scan spacing.
    Eigen::Index best_row = 0;
    model.responses().minCoeff(&best_row);
    SimplexOptions inc = sopt;
    inc.initial_step = opt.incumbent_step;
    const SimplexResult r = minimize_simplex(neg_ei, X.row(best_row).transpose(), lo, hi, inc);
    if (!near_design(r.x)) pool.emplace_back(r.x, -r.value);
  }
  for (std::size_t i = 0; i < std::min(order.size(), opt.candidates_kept); ++i) {
    pool.emplace_back(U.row(static_cast<Eigen::Index>(order[i])).transpose(), scan_ei[static_cast<Eigen::Index>(order[i])]);
  }
  std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<EiCandidate> out;
  for (const auto& [u, value] : pool) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const EiCandidate& c) {
      return unit_distance(c.x, scale_from_unit(u, domain), domain) < kDuplicateTolerance;
    });
    if (!dup) out.push_back({scale_from_unit(u, domain), value});
  }
  return out;
}

/// Global EI maximizer. `local_starts` = 0 returns the best scan point.
inline EiCandidate maximize_ei(const EiContext& ctx, SeededRng& rng, const MaximizerOptions& opt = {},
                               const Eigen::MatrixXd& extra_scan = {}) {
  auto ranked = rank_ei_candidates(ctx, rng, opt, extra_scan);
  if (ranked.empty()) throw Error("EI maximizer found no admissible candidate");
  return ranked.front();
}

}  // namespace aego
