#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace aego {

using Point = Eigen::VectorXd;

/// Max-norm radius, in unit-scaled coordinates, inside which two points count as the same.
inline constexpr double kDuplicateTolerance = 1e-8;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfDomain : public Error {
 public:
  explicit OutOfDomain(std::size_t coordinate)
      : Error("point outside domain at coordinate " + std::to_string(coordinate)),
        coordinate_(coordinate) {}
  std::size_t coordinate() const { return coordinate_; }

 private:
  std::size_t coordinate_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicatePoint : public Error {
 public:
  using Error::Error;
};

/// An objective evaluation that failed. kind() names the failure class.
class EvaluationError : public Error {
 public:
  EvaluationError(std::string kind, const std::string& what) : Error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// ---------------------------------------------------------------------------
// Domain

/// Closed rectangular box [lower, upper] in R^s.
class Domain {
 public:
  Domain(Eigen::VectorXd lower, Eigen::VectorXd upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() < 1 || lower_.size() != upper_.size()) {
      throw DimensionMismatch("domain bounds must have equal, nonzero length");
    }
    for (Eigen::Index k = 0; k < lower_.size(); ++k) {
      if (!(lower_[k] < upper_[k])) {
        throw Error("domain lower bound must be strictly below upper bound at coordinate " +
                    std::to_string(k));
      }
    }
  }

  static Domain cube(std::size_t dim, double lo, double hi) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Domain(Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi));
  }

  static Domain unit(std::size_t dim) { return cube(dim, 0.0, 1.0); }

  std::size_t dim() const { return static_cast<std::size_t>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  Eigen::VectorXd width() const { return upper_ - lower_; }

  bool contains(const Point& p) const {
    if (p.size() != lower_.size()) return false;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (!(p[k] >= lower_[k] && p[k] <= upper_[k])) return false;
    }
    return true;
  }

  bool operator==(const Domain& other) const { return lower_ == other.lower_ && upper_ == other.upper_; }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// Returns p unchanged when it lies in the closed box; never clamps.
inline const Point& clamp_or_reject(const Point& p, const Domain& d) {
  if (static_cast<std::size_t>(p.size()) != d.dim()) {
    throw DimensionMismatch("point has dimension " + std::to_string(p.size()) + ", domain has " +
                            std::to_string(d.dim()));
  }
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (!(p[k] >= d.lower()[k] && p[k] <= d.upper()[k])) {
      throw OutOfDomain(static_cast<std::size_t>(k));
    }
  }
  return p;
}

inline Point scale_to_unit(const Point& p, const Domain& d) {
  clamp_or_reject(p, d);
  return ((p - d.lower()).array() / d.width().array()).matrix();
}

inline Point scale_from_unit(const Point& u, const Domain& d) {
  if (static_cast<std::size_t>(u.size()) != d.dim()) {
    throw DimensionMismatch("unit point dimension does not match domain");
  }
  Point p = d.lower() + (u.array() * d.width().array()).matrix();
  // Keep the upper corner exact under round-off.
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    p[k] = std::clamp(p[k], d.lower()[k], d.upper()[k]);
  }
  return p;
}

/// Max-norm distance between two points measured in unit-scaled coordinates.
inline double unit_distance(const Point& a, const Point& b, const Domain& d) {
  return ((a - b).array().abs() / d.width().array()).maxCoeff();
}

// ---------------------------------------------------------------------------
// Design

enum class Origin { initial, argmax, resampled, liar };

inline const char* to_string(Origin o) {
  switch (o) {
    case Origin::initial: return "initial";
    case Origin::argmax: return "argmax";
    case Origin::resampled: return "resampled";
    case Origin::liar: return "liar";
  }
  return "unknown";
}

/// Append-only record of evaluated points and their responses.
class Design {
 public:
  explicit Design(Domain domain) : domain_(std::move(domain)) {}

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return domain_.dim(); }

  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& responses() const { return responses_; }
  const std::vector<Origin>& origins() const { return origins_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double response(std::size_t i) const { return responses_[i]; }

  double best() const { return best_; }
  std::size_t best_index() const { return best_index_; }

  bool is_duplicate(const Point& p) const {
    for (const auto& q : points_) {
      if (unit_distance(p, q, domain_) < kDuplicateTolerance) return true;
    }
    return false;
  }

  void add(const Point& p, double y, Origin origin) {
    clamp_or_reject(p, domain_);
    if (is_duplicate(p)) throw DuplicatePoint("point duplicates an existing design point");
    if (!std::isfinite(y)) throw Error("non-finite response");
    points_.push_back(p);
    responses_.push_back(y);
    origins_.push_back(origin);
    if (points_.size() == 1 || y < best_) {
      best_ = y;
      best_index_ = points_.size() - 1;
    }
  }

  /// Unit-scaled design matrix, one row per point.
  Eigen::MatrixXd unit_matrix() const {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < size(); ++i) {
      X.row(static_cast<Eigen::Index>(i)) = scale_to_unit(points_[i], domain_).transpose();
    }
    return X;
  }

  Eigen::VectorXd response_vector() const {
    return Eigen::Map<const Eigen::VectorXd>(responses_.data(), static_cast<Eigen::Index>(responses_.size()));
  }

 private:
  Domain domain_;
  std::vector<Point> points_;
  std::vector<double> responses_;
  std::vector<Origin> origins_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t best_index_ = 0;
};

// ---------------------------------------------------------------------------
// Objective

/// A black-box function with its own evaluation ledger. Not copyable: the
/// ledger belongs to exactly one Objective.
class Objective {
 public:
  using Scalar = std::function<double(const Point&)>;
  using Batch = std::function<std::vector<double>(std::span<const Point>)>;

  explicit Objective(Scalar fn) : fn_(std::move(fn)), count_(std::make_unique<std::atomic<std::size_t>>(0)) {}
  Objective(Scalar fn, Batch batch)
      : fn_(std::move(fn)), batch_(std::move(batch)), count_(std::make_unique<std::atomic<std::size_t>>(0)) {}

  Objective(Objective&&) noexcept = default;
  Objective& operator=(Objective&&) noexcept = default;
  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  double operator()(const Point& x) {
    count_->fetch_add(1);
    return fn_(x);
  }

  /// Evaluates a whole batch. The ledger is charged for every point before
  /// any evaluation runs, so failures still count.
  std::vector<double> evaluate(std::span<const Point> xs) {
    count_->fetch_add(xs.size());
    if (batch_) return batch_(xs);
    std::vector<double> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back(fn_(x));
    return ys;
  }

  std::size_t evaluations() const { return count_->load(); }

 private:
  Scalar fn_;
  Batch batch_;
  std::unique_ptr<std::atomic<std::size_t>> count_;
};

// ---------------------------------------------------------------------------
// SeededRng

/// 64-bit seeded generator. Streams are fully determined by the seed, and
/// uniform draws use an explicit bit recipe so they do not depend on the
/// standard library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n), unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw Error("SeededRng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % n;
  }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(std::distance(first, last));
    for (std::uint64_t i = n; i > 1; --i) {
      std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(below(i)));
    }
  }

  /// Child stream keyed by `key`; depends only on this stream's seed, not on
  /// how many draws have been taken from it.
  SeededRng split(std::uint64_t key) const { return SeededRng(mix(seed_ ^ mix(key + 0x9e3779b97f4a7c15ULL))); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace aego
