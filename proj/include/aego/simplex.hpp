#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace aego {

struct SimplexOptions {
  double initial_step = 0.1;   // edge length of the starting simplex, as a fraction of the box width
  std::size_t max_evaluations = 200;
  double f_tolerance = 1e-10;  // spread of vertex values at which to stop
  double x_tolerance = 1e-9;   // simplex diameter at which to stop
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

/// Nelder-Mead minimization confined to a box. Trial points are projected onto
/// the box before evaluation, so every evaluated point is feasible. Non-finite
/// objective values are treated as +inf.
template <typename F>
SimplexResult minimize_simplex(F&& f, const Eigen::VectorXd& start, const Eigen::VectorXd& lower,
                               const Eigen::VectorXd& upper, const SimplexOptions& opt = {}) {
  const Eigen::Index dim = start.size();
  const auto n = static_cast<std::size_t>(dim);
  SimplexResult result;

  auto project = [&](Eigen::VectorXd x) {
    for (Eigen::Index k = 0; k < dim; ++k) x[k] = std::clamp(x[k], lower[k], upper[k]);
    return x;
  };
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> verts;
  std::vector<double> vals;
  verts.reserve(n + 1);
  verts.push_back(project(start));
  for (Eigen::Index k = 0; k < dim; ++k) {
    Eigen::VectorXd v = verts.front();
    const double step = opt.initial_step * (upper[k] - lower[k]);
    // Step away from whichever bound is closer so the vertex stays distinct.
    v[k] += (v[k] + step <= upper[k]) ? step : -step;
    verts.push_back(project(v));
  }
  for (const auto& v : verts) vals.push_back(eval(v));

  std::vector<std::size_t> order(n + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<Eigen::VectorXd> v2;
    std::vector<double> f2;
    v2.reserve(n + 1);
    f2.reserve(n + 1);
    for (auto i : order) {
      v2.push_back(std::move(verts[i]));
      f2.push_back(vals[i]);
    }
    verts = std::move(v2);
    vals = std::move(f2);
  };

  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  while (result.evaluations < opt.max_evaluations) {
    sort_vertices();
    const double spread = std::abs(vals[n] - vals[0]);
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) diameter = std::max(diameter, (verts[i] - verts[0]).lpNorm<Eigen::Infinity>());
    if ((std::isfinite(vals[n]) && spread <= opt.f_tolerance * (1.0 + std::abs(vals[0]))) || diameter <= opt.x_tolerance) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < n; ++i) centroid += verts[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = project(centroid + kReflect * (centroid - verts[n]));
    const double fr = eval(xr);
    if (fr < vals[0]) {
      const Eigen::VectorXd xe = project(centroid + kExpand * (xr - centroid));
      const double fe = eval(xe);
      if (fe < fr) {
        verts[n] = xe;
        vals[n] = fe;
      } else {
        verts[n] = xr;
        vals[n] = fr;
      }
      continue;
    }
    if (fr < vals[n - 1]) {
      verts[n] = xr;
      vals[n] = fr;
      continue;
    }
    const bool outside = fr < vals[n];
    const Eigen::VectorXd xc =
        outside ? project(centroid + kContract * (xr - centroid)) : project(centroid + kContract * (verts[n] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[n])) {
      verts[n] = xc;
      vals[n] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      verts[i] = project(verts[0] + kShrink * (verts[i] - verts[0]));
      vals[i] = eval(verts[i]);
    }
  }

  sort_vertices();
  result.x = verts[0];
  result.value = vals[0];
  return result;
}

}  // namespace aego
