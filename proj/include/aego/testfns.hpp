#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "core.hpp"

namespace aego {

class UnknownFunction : public Error {
 public:
  using Error::Error;
};

struct TestFunction {
  std::string name;
  Domain domain;
  std::function<double(const Point&)> evaluate;
  double minimum;
  std::vector<Point> minimizers;

  std::size_t dim() const { return domain.dim(); }
  double operator()(const Point& x) const { return evaluate(x); }
};

namespace testfns {

inline Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) p[i++] = c;
  return p;
}

inline double branin(const Point& v) {
  const double x = v[0], y = v[1];
  constexpr double pi = std::numbers::pi;
  const double t = y - 5.1 / (4.0 * pi * pi) * x * x + 5.0 / pi * x - 6.0;
  return t * t + 10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(x) + 10.0;
}

inline double sixcamel(const Point& v) {
  const double x = v[0], y = v[1];
  const double x2 = x * x, y2 = y * y;
  return 4.0 * x2 - 2.1 * x2 * x2 + x2 * x2 * x2 / 3.0 + x * y - 4.0 * y2 + 4.0 * y2 * y2;
}

// Log-transformed Goldstein-Price.
inline double goldprice(const Point& v) {
  const double x = v[0], y = v[1];
  const double a = 1.0 + (x + y + 1.0) * (x + y + 1.0) *
                             (19.0 - 14.0 * x + 3.0 * x * x - 14.0 * y + 6.0 * x * y + 3.0 * y * y);
  const double b = 30.0 + (2.0 * x - 3.0 * y) * (2.0 * x - 3.0 * y) *
                              (18.0 - 32.0 * x + 12.0 * x * x + 48.0 * y - 36.0 * x * y + 27.0 * y * y);
  return (std::log(a * b) - 8.693) / 2.427;
}

inline double sin2(const Point& v) {
  const double x = v[0], y = v[1];
  const double sx = std::sin(x), sy = std::sin(y);
  return 1.0 + sx * sx + sy * sy - 0.1 * std::exp(-x * x - y * y);
}

inline constexpr std::array<double, 4> kHartmannAlpha{1.0, 1.2, 3.0, 3.2};

inline constexpr std::array<std::array<double, 3>, 4> kHartmann3A{{
    {3.0, 10.0, 30.0},
    {0.1, 10.0, 35.0},
    {3.0, 10.0, 30.0},
    {0.1, 10.0, 35.0},
}};
inline constexpr std::array<std::array<double, 3>, 4> kHartmann3P{{
    {3689, 1170, 2673},
    {4699, 4387, 7470},
    {1091, 8732, 5547},
    {381, 5743, 8828},
}};

inline constexpr std::array<std::array<double, 6>, 4> kHartmann6A{{
    {10, 3, 17, 3.5, 1.7, 8},
    {0.05, 10, 17, 0.1, 8, 14},
    {3, 3.5, 1.7, 10, 17, 8},
    {17, 8, 0.05, 10, 0.1, 14},
}};
inline constexpr std::array<std::array<double, 6>, 4> kHartmann6P{{
    {1312, 1696, 5569, 124, 8283, 5886},
    {2329, 4135, 8307, 3736, 1004, 9991},
    {2348, 1451, 3522, 2883, 3047, 6650},
    {4047, 8828, 8732, 5743, 1091, 381},
}};

template <std::size_t S>
double hartmann(const Point& x, const std::array<std::array<double, S>, 4>& A, const std::array<std::array<double, S>, 4>& P) {
  double f = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
      const double d = x[static_cast<Eigen::Index>(j)] - P[i][j] * 1e-4;
      inner += A[i][j] * d * d;
    }
    f -= kHartmannAlpha[i] * std::exp(-inner);
  }
  return f;
}

inline double ackley(const Point& x) {
  constexpr double a = 20.0, b = 0.2, c = 2.0 * std::numbers::pi;
  const double s = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sq += x[i] * x[i];
    cs += std::cos(c * x[i]);
  }
  return -a * std::exp(-b * std::sqrt(sq / s)) - std::exp(cs / s) + a + std::numbers::e;
}

inline double levy(const Point& x) {
  constexpr double pi = std::numbers::pi;
  const Eigen::Index s = x.size();
  auto w = [&](Eigen::Index i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s0 = std::sin(pi * w(0));
  double f = s0 * s0;
  for (Eigen::Index i = 0; i + 1 < s; ++i) {
    const double wi = w(i);
    const double si = std::sin(pi * wi + 1.0);
    f += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * si * si);
  }
  const double ws = w(s - 1);
  const double ss = std::sin(2.0 * pi * ws);
  return f + (ws - 1.0) * (ws - 1.0) * (1.0 + ss * ss);
}

inline double trid(const Point& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) f += (x[i] - 1.0) * (x[i] - 1.0);
  for (Eigen::Index i = 1; i < x.size(); ++i) f -= x[i] * x[i - 1];
  return f;
}

inline TestFunction make_ackley(std::size_t s, double half_width, std::string name) {
  return {std::move(name), Domain::cube(s, -half_width, half_width), ackley, 0.0,
          {Point::Zero(static_cast<Eigen::Index>(s))}};
}

inline TestFunction make_levy(std::size_t s) {
  return {"levy" + std::to_string(s), Domain::cube(s, -10.0, 10.0), levy, 0.0,
          {Point::Ones(static_cast<Eigen::Index>(s))}};
}

inline TestFunction make_trid(std::size_t s) {
  const double sd = static_cast<double>(s);
  Point xstar(static_cast<Eigen::Index>(s));
  for (std::size_t i = 1; i <= s; ++i) xstar[static_cast<Eigen::Index>(i - 1)] = static_cast<double>(i * (s + 1 - i));
  return {"trid" + std::to_string(s), Domain::cube(s, -sd * sd, sd * sd), trid, -sd * (sd + 4.0) * (sd - 1.0) / 6.0,
          {xstar}};
}

}  // namespace testfns

/// Catalog lookup. Fixed entries: branin, sixcamel, goldprice, sin2,
/// hartmann3, hartmann6, ackley_toy (2-D on [-2,2]^2). Parametric families
/// take the dimension as a suffix: ackley<s>, levy<s>, trid<s>.
inline TestFunction lookup_function(const std::string& name) {
  using namespace testfns;
  constexpr double pi = std::numbers::pi;
  if (name == "branin") {
    return {name, Domain(pt({-5.0, 0.0}), pt({10.0, 15.0})), branin, 0.397887,
            {pt({-pi, 12.275}), pt({pi, 2.275}), pt({9.42478, 2.475})}};
  }
  if (name == "sixcamel") {
    return {name, Domain(pt({-2.0, -1.0}), pt({2.0, 1.0})), sixcamel, -1.0316,
            {pt({0.0898, -0.7126}), pt({-0.0898, 0.7126})}};
  }
  if (name == "goldprice") return {name, Domain::cube(2, -2.0, 2.0), goldprice, -3.129126, {pt({0.0, -1.0})}};
  if (name == "sin2") return {name, Domain::cube(2, -5.0, 5.0), sin2, 0.9, {pt({0.0, 0.0})}};
  if (name == "hartmann3") {
    return {name, Domain::unit(3), [](const Point& x) { return hartmann(x, kHartmann3A, kHartmann3P); }, -3.86278,
            {pt({0.1146, 0.5556, 0.8525})}};
  }
  if (name == "hartmann6") {
    return {name, Domain::unit(6), [](const Point& x) { return hartmann(x, kHartmann6A, kHartmann6P); }, -3.32237,
            {pt({0.2017, 0.1500, 0.4769, 0.2753, 0.3117, 0.6573})}};
  }
  if (name == "ackley_toy") return make_ackley(2, 2.0, name);

  auto parametric = [&](const std::string& prefix) -> std::size_t {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return 0;
    std::size_t s = 0;
    for (std::size_t i = prefix.size(); i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
      s = s * 10 + static_cast<std::size_t>(name[i] - '0');
      if (s > 1000) return 0;
    }
    return s;
  };
  if (const auto s = parametric("ackley"); s >= 1) return make_ackley(s, 5.12, name);
  if (const auto s = parametric("levy"); s >= 2) return make_levy(s);
  if (const auto s = parametric("trid"); s >= 2) return make_trid(s);
  throw UnknownFunction("unknown test function '" + name + "'");
}

inline std::vector<std::string> function_names() {
  return {"branin", "sixcamel", "goldprice", "sin2", "hartmann3", "hartmann6", "ackley_toy", "ackley10", "levy10", "trid12"};
}

}  // namespace aego
