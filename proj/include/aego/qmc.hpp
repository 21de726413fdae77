#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "sobol_directions.hpp"

namespace aego {

class DimensionUnsupported : public Error {
 public:
  using Error::Error;
};

enum class PoolGenerator { sobol, lhs, external };

/// m candidate points (rows) in domain coordinates.
struct CandidatePool {
  Eigen::MatrixXd points;
  PoolGenerator generator = PoolGenerator::sobol;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  Point point(std::size_t i) const { return points.row(static_cast<Eigen::Index>(i)).transpose(); }
};

/// A pool after random shift and boundary wrap. `shift` is the drawn Delta.
struct ShiftedPool {
  Eigen::MatrixXd points;
  Eigen::VectorXd shift;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  Point point(std::size_t i) const { return points.row(static_cast<Eigen::Index>(i)).transpose(); }
};

// ---------------------------------------------------------------------------
// Sobol

inline constexpr std::size_t kSobolBits = 32;

/// Generates Sobol points in natural (non-Gray-code) order, skipping the
/// origin. Point i (0-based) is the Sobol point with index i + 1.
class SobolSequence {
 public:
  explicit SobolSequence(std::size_t dim) : dim_(dim), directions_(dim) {
    if (dim == 0 || dim > detail::kSobolMaxDimension) {
      throw DimensionUnsupported("Sobol generator supports dimensions 1.." +
                                 std::to_string(detail::kSobolMaxDimension) + ", got " + std::to_string(dim));
    }
    for (std::size_t j = 0; j < dim; ++j) {
      auto& v = directions_[j];
      const auto& entry = detail::kSobolDirections[j];
      if (j == 0) {
        for (std::size_t k = 1; k <= kSobolBits; ++k) v[k - 1] = std::uint32_t{1} << (kSobolBits - k);
        continue;
      }
      const std::size_t s = entry.degree;
      for (std::size_t k = 1; k <= std::min(s, kSobolBits); ++k) v[k - 1] = entry.m[k - 1] << (kSobolBits - k);
      for (std::size_t k = s + 1; k <= kSobolBits; ++k) {
        std::uint32_t vk = v[k - s - 1] ^ (v[k - s - 1] >> s);
        for (std::size_t l = 1; l + 1 <= s; ++l) {
          if ((entry.coeffs >> (s - 1 - l)) & 1U) vk ^= v[k - l - 1];
        }
        v[k - 1] = vk;
      }
    }
  }

  std::size_t dim() const { return dim_; }

  /// Unit-cube coordinates of the Sobol point with the given (1-based) index.
  Eigen::VectorXd at(std::uint64_t index) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim_));
    for (std::size_t j = 0; j < dim_; ++j) {
      std::uint32_t acc = 0;
      std::uint64_t i = index;
      for (std::size_t b = 0; i != 0 && b < kSobolBits; ++b, i >>= 1) {
        if (i & 1U) acc ^= directions_[j][b];
      }
      x[static_cast<Eigen::Index>(j)] = static_cast<double>(acc) * 0x1.0p-32;
    }
    return x;
  }

  /// First m points after the skipped origin, as rows.
  Eigen::MatrixXd first(std::size_t m) const {
    if (m >= (std::uint64_t{1} << kSobolBits)) throw Error("too many Sobol points requested");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < m; ++i) out.row(static_cast<Eigen::Index>(i)) = at(i + 1).transpose();
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<std::array<std::uint32_t, kSobolBits>> directions_;
};

inline Eigen::MatrixXd unit_to_domain(const Eigen::MatrixXd& U, const Domain& d) {
  Eigen::MatrixXd P(U.rows(), U.cols());
  for (Eigen::Index i = 0; i < U.rows(); ++i) P.row(i) = scale_from_unit(U.row(i).transpose(), d).transpose();
  return P;
}

inline Eigen::MatrixXd domain_to_unit(const Eigen::MatrixXd& P, const Domain& d) {
  Eigen::MatrixXd U(P.rows(), P.cols());
  for (Eigen::Index i = 0; i < P.rows(); ++i) U.row(i) = scale_to_unit(P.row(i).transpose(), d).transpose();
  return U;
}

inline CandidatePool sobol_pool(std::size_t m, const Domain& domain) {
  if (m < 1) throw Error("pool size must be at least 1");
  const SobolSequence seq(domain.dim());
  return {unit_to_domain(seq.first(m), domain), PoolGenerator::sobol};
}

/// Default candidate-pool size for dimension s, and the recommended range.
inline std::size_t default_pool_size(std::size_t s) { return 75 * s; }
inline std::size_t clamp_pool_size(std::size_t m, std::size_t s) { return std::clamp(m, 50 * s, 100 * s); }

// ---------------------------------------------------------------------------
// Maximin Latin hypercube

struct LhsOptions {
  std::size_t swap_iterations = 2000;
};

namespace detail {

inline double min_pairwise(const Eigen::MatrixXd& D2) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < D2.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) best = std::min(best, D2(i, j));
  }
  return best;
}

// Sum of d^-10 over pairs; breaks ties between designs with equal minimum distance.
inline double pair_energy(const Eigen::MatrixXd& D2) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < D2.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double inv = 1.0 / D2(i, j);
      e += inv * inv * inv * inv * inv;
    }
  }
  return e;
}

inline void refresh_rows(const Eigen::MatrixXd& U, Eigen::MatrixXd& D2, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index r : {a, b}) {
    for (Eigen::Index j = 0; j < U.rows(); ++j) {
      if (j == r) continue;
      D2(r, j) = D2(j, r) = (U.row(r) - U.row(j)).squaredNorm();
    }
  }
}

}  // namespace detail

/// n-point Latin hypercube, one point per stratum on every axis, improved
/// toward maximin by coordinate swaps. A swap is kept only when it raises the
/// minimum pairwise distance, or keeps it and lowers the pair energy.
inline CandidatePool lhs_initial_design(std::size_t n, const Domain& domain, SeededRng& rng, const LhsOptions& opt = {}) {
  if (n < 2) throw Error("Latin hypercube needs at least 2 points");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(domain.dim());
  Eigen::MatrixXd U(rows, cols);
  std::vector<std::size_t> perm(n);
  for (Eigen::Index k = 0; k < cols; ++k) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm.begin(), perm.end());
    for (Eigen::Index i = 0; i < rows; ++i) {
      U(i, k) = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + rng.uniform()) / static_cast<double>(n);
    }
  }

  Eigen::MatrixXd D2 = Eigen::MatrixXd::Zero(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) D2(i, j) = D2(j, i) = (U.row(i) - U.row(j)).squaredNorm();
  }
  double cur_min = detail::min_pairwise(D2);
  double cur_energy = detail::pair_energy(D2);
  for (std::size_t it = 0; it < opt.swap_iterations; ++it) {
    const auto k = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(cols)));
    const auto a = static_cast<Eigen::Index>(rng.below(n));
    auto b = static_cast<Eigen::Index>(rng.below(n - 1));
    if (b >= a) ++b;
    std::swap(U(a, k), U(b, k));
    detail::refresh_rows(U, D2, a, b);
    const double new_min = detail::min_pairwise(D2);
    const double new_energy = detail::pair_energy(D2);
    if (new_min > cur_min || (new_min == cur_min && new_energy < cur_energy)) {
      cur_min = new_min;
      cur_energy = new_energy;
    } else {
      std::swap(U(a, k), U(b, k));
      detail::refresh_rows(U, D2, a, b);
    }
  }
  return {unit_to_domain(U, domain), PoolGenerator::lhs};
}

// ---------------------------------------------------------------------------
// Random shift with boundary wrap

/// Folds a shifted coordinate back into [a, b]: values above b re-enter at a,
/// values below a re-enter at b, values on the closed interval are kept.
inline double wrap_coordinate(double z, double a, double b) {
  while (z > b || z < a) {
    if (z > b) {
      z = a + (z - b);
    } else {
      z = b - (a - z);
    }
  }
  return z;
}

/// Adds `offset` to every pool point and wraps each coordinate into the domain.
inline Eigen::MatrixXd shift_and_wrap(const Eigen::MatrixXd& points, const Domain& d, const Eigen::VectorXd& offset) {
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k) {
      out(i, k) = wrap_coordinate(points(i, k) + offset[k], d.lower()[k], d.upper()[k]);
    }
  }
  return out;
}

/// Draws Delta uniformly on the domain and shifts the pool by Delta - a, so
/// that Delta = a leaves the pool unchanged.
inline ShiftedPool random_shift(const CandidatePool& pool, const Domain& domain, SeededRng& rng) {
  Eigen::VectorXd delta(static_cast<Eigen::Index>(domain.dim()));
  for (Eigen::Index k = 0; k < delta.size(); ++k) delta[k] = rng.uniform(domain.lower()[k], domain.upper()[k]);
  return {shift_and_wrap(pool.points, domain, delta - domain.lower()), delta};
}

// ---------------------------------------------------------------------------
// CSV exchange: one point per row, comma separated, no header. Lines starting
// with '#' are ignored on read.

inline void write_pool_csv(std::ostream& os, const Eigen::MatrixXd& points) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k) {
      if (k) os << ',';
      os << points(i, k);
    }
    os << '\n';
  }
}

inline void write_pool_csv(const std::string& path, const Eigen::MatrixXd& points) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_pool_csv(os, points);
}

inline Eigen::MatrixXd read_pool_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      row.push_back(std::stod(cell, &used));
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw Error("ragged pool CSV");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("empty pool CSV");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return out;
}

/// Loads an external pool and checks every point against the domain.
inline CandidatePool read_pool_csv(const std::string& path, const Domain& domain) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  CandidatePool pool{read_pool_csv(is), PoolGenerator::external};
  if (static_cast<std::size_t>(pool.points.cols()) != domain.dim()) throw DimensionMismatch("pool CSV column count");
  for (std::size_t i = 0; i < pool.size(); ++i) clamp_or_reject(pool.point(i), domain);
  return pool;
}

}  // namespace aego
