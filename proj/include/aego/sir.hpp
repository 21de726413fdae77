#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "acquisition.hpp"
#include "core.hpp"
#include "qmc.hpp"

namespace aego {

class PoolExhausted : public Error {
 public:
  using Error::Error;
};

/// Pool points with normalized importance weights proportional to EI.
struct WeightedPool {
  Eigen::MatrixXd points;
  std::vector<double> weights;
  std::vector<double> raw;
  bool degenerate = false;  // weights fell back to uniform

  std::size_t size() const { return weights.size(); }
  Point point(std::size_t i) const { return points.row(static_cast<Eigen::Index>(i)).transpose(); }
};

/// Normalizes raw nonnegative scores. When their sum is below 1e-300 * m the
/// pool is flagged degenerate and gets uniform weights.
inline WeightedPool weigh_values(Eigen::MatrixXd points, std::vector<double> raw) {
  WeightedPool wp{std::move(points), {}, std::move(raw), false};
  const std::size_t m = wp.raw.size();
  if (m == 0) throw Error("cannot weigh an empty pool");
  const double total = std::accumulate(wp.raw.begin(), wp.raw.end(), 0.0);
  wp.weights.resize(m);
  if (!(total >= 1e-300 * static_cast<double>(m))) {
    wp.degenerate = true;
    std::fill(wp.weights.begin(), wp.weights.end(), 1.0 / static_cast<double>(m));
    return wp;
  }
  for (std::size_t i = 0; i < m; ++i) wp.weights[i] = wp.raw[i] / total;
  return wp;
}

inline WeightedPool weigh(const ShiftedPool& pool, const EiContext& ctx) {
  const Eigen::VectorXd values = ei_batch_unit(ctx, domain_to_unit(pool.points, ctx.model().domain()));
  return weigh_values(pool.points, std::vector<double>(values.data(), values.data() + values.size()));
}

struct Draw {
  std::size_t index;
  Point x;
  double weight;
};

/// Draws J distinct pool points without replacement by sequential inverse-CDF
/// sampling on the renormalized weights of the points still admissible. A
/// point is inadmissible once it lies within the duplicate tolerance of an
/// exclusion or of an earlier draw. If every admissible point has zero weight,
/// the draw is uniform over the admissible points.
inline std::vector<Draw> resample(const WeightedPool& wp, std::size_t J, SeededRng& rng, std::span<const Point> exclusions,
                                  const Domain& domain) {
  const std::size_t m = wp.size();
  std::vector<char> admissible(m, 1);
  std::size_t open = m;
  auto close_near = [&](const Point& p) {
    for (std::size_t i = 0; i < m; ++i) {
      if (admissible[i] && unit_distance(wp.point(i), p, domain) < kDuplicateTolerance) {
        admissible[i] = 0;
        --open;
      }
    }
  };
  for (const auto& e : exclusions) close_near(e);

  std::vector<Draw> out;
  out.reserve(J);
  while (out.size() < J) {
    if (open == 0) {
      throw PoolExhausted("only " + std::to_string(out.size()) + " admissible pool points for a draw of " +
                          std::to_string(J));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (admissible[i]) total += wp.weights[i];
    }
    std::size_t pick = m;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!admissible[i] || wp.weights[i] <= 0.0) continue;
        pick = i;  // last positive-weight candidate absorbs round-off at the top end
        acc += wp.weights[i];
        if (target < acc) break;
      }
    } else {
      std::uint64_t k = rng.below(open);
      for (std::size_t i = 0; i < m; ++i) {
        if (admissible[i] && k-- == 0) {
          pick = i;
          break;
        }
      }
    }
    out.push_back({pick, wp.point(pick), wp.weights[pick]});
    close_near(out.back().x);
  }
  return out;
}

}  // namespace aego
