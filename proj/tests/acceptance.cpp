// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero
// if any fails. Pass criterion keys as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <aego/aego.hpp>

using namespace aego;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("aego_acceptance_" + name);
  fs::remove_all(d);
  return d;
}

CampaignResult run(const std::string& name, const std::string& json, std::size_t parallelism = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = scratch(name);
  CampaignResult res = run_campaign(parse_campaign(nlohmann::json::parse(json)), dir, {parallelism, {}});
  fs::remove_all(dir);
  std::fprintf(stderr, "  [%s: %.1f s]\n", name.c_str(),
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return res;
}

const SummaryRow& row(const CampaignResult& r, const std::string& id) {
  for (const auto& x : r.rows) {
    if (x.spec_id == id) return x;
  }
  throw std::runtime_error("no summary row " + id);
}

std::string ok_count(const SummaryRow& r) {
  return std::to_string(r.replicates - r.failed) + "/" + std::to_string(r.replicates) + " ok";
}

bool all_ok(const CampaignResult& r) { return r.failed() == 0; }

bool all_reached_target(const CampaignResult& r, const std::string& id) {
  return std::all_of(r.results.begin(), r.results.end(),
                     [&](const ReplicateResult& x) { return x.spec_id != id || x.record.stop == StopReason::target; });
}

void branin_convergence() {
  const auto res = run("branin", R"({
    "base_seed": 1000, "repetitions": 25,
    "defaults": {"function": "branin", "epsilon": 0.01, "initial": 21, "pool_size": 100},
    "experiments": [{"id": "ego", "strategy": "ego"}, {"id": "aego12", "strategy": "accelerated", "q": 12}]
  })");
  const auto& e = row(res, "ego");
  const auto& a = row(res, "aego12");
  const bool ok = all_ok(res) && e.stages.median <= 25.0 && a.stages.median <= 5.0;
  report(ok, "1 branin-convergence",
         "EGO median " + fmt("%g", e.stages.median) + " (mean " + fmt("%.2f", e.stages.mean) + ", limit 25), " +
             "12-point accelerated median " + fmt("%g", a.stages.median) + " (mean " + fmt("%.2f", a.stages.mean) +
             ", limit 5), " + ok_count(e) + ", " + ok_count(a));
}

void sixcamel_constant_liar() {
  const auto res = run("sixcamel", R"({
    "base_seed": 1100, "repetitions": 25,
    "experiments": [{"id": "cl8", "function": "sixcamel", "strategy": "cl", "q": 8, "epsilon": 0.001}]
  })");
  const auto& r = row(res, "cl8");
  report(all_ok(res) && r.stages.median <= 6.0, "1b sixcamel-cl8",
         "median " + fmt("%g", r.stages.median) + " (mean " + fmt("%.2f", r.stages.mean) + ", limit 6), " + ok_count(r));
}

void pool_size_insensitivity() {
  const auto res = run("ackley_pool", R"({
    "base_seed": 1200, "repetitions": 25,
    "defaults": {"function": "ackley_toy", "strategy": "accelerated", "q": 5, "epsilon": 0.01, "initial": 21,
                 "kernel": "matern52"},
    "experiments": [{"id": "m", "pool_size": [50, 100, 150]}]
  })");
  double lo = INFINITY, hi = -INFINITY;
  std::string detail;
  bool reached = all_ok(res);
  for (const char* id : {"m-m50", "m-m100", "m-m150"}) {
    const auto& r = row(res, id);
    lo = std::min(lo, r.stages.median);
    hi = std::max(hi, r.stages.median);
    detail += std::string(id + 2) + " median " + fmt("%g", r.stages.median) + " mean " + fmt("%.2f", r.stages.mean) + "; ";
    reached = reached && all_reached_target(res, id);
  }
  report(reached && hi - lo <= 3.0, "2 pool-size-insensitivity", detail + "spread " + fmt("%g", hi - lo) + " (limit 3)");
  const auto& m100 = row(res, "m-m100");
  report(all_ok(res) && m100.stages.median <= 9.0, "2b ackley-toy-q5-m100",
         "median " + fmt("%g", m100.stages.median) + " (limit 9)");
}

void batch_speedup() {
  const auto res = run("sin2", R"({
    "base_seed": 1300, "repetitions": 25,
    "defaults": {"function": "sin2", "epsilon": 0.01},
    "experiments": [{"id": "ego", "strategy": "ego"}, {"id": "aego4", "strategy": "accelerated", "q": 4}]
  })");
  const auto& e = row(res, "ego");
  const auto& a = row(res, "aego4");
  const double ratio = e.stages.mean / a.stages.mean;
  const bool reached = all_reached_target(res, "ego") && all_reached_target(res, "aego4");
  report(all_ok(res) && reached && ratio >= 1.5 && ratio <= 4.0, "3 batch-speedup",
         "EGO mean " + fmt("%.2f", e.stages.mean) + ", 4-point accelerated mean " + fmt("%.2f", a.stages.mean) +
             ", ratio " + fmt("%.2f", ratio) + " (range [1.5, 4.0])");
}

void selection_cost() {
  const auto res = run("hartmann6_cost", R"({
    "base_seed": 1400, "repetitions": 5,
    "defaults": {"function": "hartmann6", "q": 8, "initial": 65, "max_updates": 80, "fit_restarts": 3},
    "experiments": [{"id": "cl", "strategy": "cl"}, {"id": "aego", "strategy": "accelerated"}]
  })");
  double cl = 0.0, ae = 0.0;
  bool ten = true;
  for (const auto& r : res.results) {
    double s = 0.0;
    for (const auto& st : r.record.stages) s += st.timing.select_seconds;
    (r.spec_id == "cl" ? cl : ae) += s;
    ten = ten && r.record.stage_count() == 10;
  }
  report(all_ok(res) && ten && cl >= 2.0 * ae, "4 selection-cost",
         "CL(min) selection " + fmt("%.3f", cl) + " s, accelerated " + fmt("%.3f", ae) + " s, ratio " +
             fmt("%.2f", cl / ae) + " (limit >= 2), 10 stages each: " + (ten ? "yes" : "no"));
}

void high_dimensional() {
  const auto res = run("ackley10", R"({
    "base_seed": 1500, "repetitions": 5,
    "experiments": [{"id": "aego", "function": "ackley10", "strategy": "accelerated", "q": 10, "initial": 100,
                     "pool_size": 750, "max_updates": 150, "fit_restarts": 3}]
  })");
  const auto& r = row(res, "aego");
  bool monotone = true;
  for (const auto& x : res.results) {
    double prev = *std::min_element(x.record.initial_responses.begin(), x.record.initial_responses.end());
    for (const auto& st : x.record.stages) {
      monotone = monotone && st.best <= prev;
      prev = st.best;
    }
    monotone = monotone && x.record.total_evaluations == 250;
  }
  report(all_ok(res) && monotone && r.best.mean <= 3.0, "5 ackley10-sanity",
         "mean best " + fmt("%.3f", r.best.mean) + " (sd " + fmt("%.3f", r.best.sd) + ", limit 3.0), monotone traces: " +
             (monotone ? "yes" : "no") + ", " + ok_count(r));
}

// ---------------------------------------------------------------------------
// Property suite

bool kriging_invariants(std::string& why) {
  SeededRng rng(1600);
  for (int t = 0; t < 50; ++t) {
    const std::size_t s = 1 + static_cast<std::size_t>(t % 4);
    const std::size_t n = 5 + static_cast<std::size_t>(t % 11);
    const Domain d = Domain::cube(s, -3.0, 2.0);
    const CandidatePool lhs = lhs_initial_design(n, d, rng);
    Design design(d);
    for (std::size_t i = 0; i < n; ++i) {
      const Point& x = lhs.point(i);
      design.add(x, std::sin(2.0 * x.sum()) + 0.1 * x.squaredNorm(), Origin::initial);
    }
    const auto m = KrigingModel::fit(design, rng);
    const double scale = design.response_vector().cwiseAbs().maxCoeff() + 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = m.predict(design.point(i));
      if (std::abs(p.mean - design.response(i)) > 1e-6 * scale || p.sd * p.sd > 1e-6 * m.sigma2()) {
        why = "design " + std::to_string(t) + " does not interpolate";
        return false;
      }
    }
    for (int k = 0; k < 100; ++k) {
      Point x(static_cast<Eigen::Index>(s));
      for (auto& v : x) v = rng.uniform(-3.0, 2.0);
      if (!(m.predict(x).sd >= 0.0)) {
        why = "negative variance";
        return false;
      }
    }
  }
  return true;
}

bool ei_invariants(std::string& why) {
  const double spot = expected_improvement(1.0, 0.0, 1.0);
  if (std::abs(spot - 1.0833154705876863) > 1e-12) {
    why = "EI spot value " + fmt("%.16f", spot);
    return false;
  }
  const TestFunction f = lookup_function("sixcamel");
  SeededRng rng(1700);
  const CandidatePool lhs = lhs_initial_design(15, f.domain, rng);
  Design design(f.domain);
  for (std::size_t i = 0; i < 15; ++i) design.add(lhs.point(i), f(lhs.point(i)), Origin::initial);
  const auto m = KrigingModel::fit(design, rng);
  const EiContext ctx(m);
  const Eigen::VectorXd y = design.response_vector();
  for (std::size_t i = 0; i < design.size(); ++i) {
    if (ei(ctx, design.point(i)) > 1e-8 * (y.maxCoeff() - y.minCoeff())) {
      why = "EI nonzero at a design point";
      return false;
    }
  }
  for (int i = 0; i < 10000; ++i) {
    if (ei(ctx, Point(Eigen::Vector2d(rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0)))) < 0.0) {
      why = "negative EI";
      return false;
    }
  }
  return true;
}

bool shift_invariants(std::string& why) {
  if (wrap_coordinate(2.5, -2.0, 2.0) != -1.5 || wrap_coordinate(1.0, -2.0, 2.0) != 1.0 ||
      wrap_coordinate(-0.5, 0.0, 1.0) != 0.5) {
    why = "three-case wrap values";
    return false;
  }
  const Domain d(Eigen::Vector2d(-5.0, 0.0), Eigen::Vector2d(10.0, 15.0));
  const CandidatePool pool = sobol_pool(150, d);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SeededRng rng(seed);
    const ShiftedPool s = random_shift(pool, d, rng);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!d.contains(s.point(i))) {
        why = "shifted point left the domain";
        return false;
      }
    }
  }
  const int m = 8;
  Eigen::MatrixXd grid(m, 1);
  for (int i = 1; i <= m; ++i) grid(i - 1, 0) = static_cast<double>(i) / m;
  std::vector<double> original(grid.data(), grid.data() + m);
  for (int j = 0; j < m; ++j) {
    const Eigen::MatrixXd out = shift_and_wrap(grid, Domain::unit(1), Eigen::VectorXd::Constant(1, double(j) / m));
    std::vector<double> got(out.data(), out.data() + m);
    std::sort(got.begin(), got.end());
    if (got != original) {
      why = "grid shift " + std::to_string(j) + "/8 is not a permutation";
      return false;
    }
  }
  return true;
}

bool resampling_invariants(std::string& why) {
  Eigen::MatrixXd P(3, 1);
  P << 0.1, 0.5, 0.9;
  const std::vector<double> w{0.5, 0.3, 0.2};
  const WeightedPool wp = weigh_values(P, w);
  SeededRng rng(1800);
  const int n = 100000;
  std::array<int, 3> counts{};
  for (int i = 0; i < n; ++i) ++counts[resample(wp, 1, rng, {}, Domain::unit(1)).front().index];
  double chi2 = 0.0;
  for (std::size_t k = 0; k < 3; ++k) chi2 += std::pow(counts[k] - n * w[k], 2) / (n * w[k]);
  const double p = std::exp(-chi2 / 2.0);
  if (!(p > 0.001)) {
    why = "chi-square p = " + fmt("%.2e", p);
    return false;
  }
  Eigen::MatrixXd Q(10, 1);
  for (int i = 0; i < 10; ++i) Q(i, 0) = (i + 0.5) / 10;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> raw(10);
    for (auto& r : raw) r = rng.uniform();
    std::set<std::size_t> idx;
    for (const auto& dr : resample(weigh_values(Q, raw), 5, rng, {}, Domain::unit(1))) {
      if (!idx.insert(dr.index).second) {
        why = "repeated draw";
        return false;
      }
    }
  }
  return true;
}

bool catalog_optima(std::string& why) {
  struct Case {
    const char* name;
    double minimum;
    double tol;
  };
  for (const Case& c : {Case{"branin", 0.397887, 1e-5}, Case{"goldprice", -3.129126, 1e-5},
                        Case{"hartmann3", -3.86278, 1e-4}, Case{"hartmann6", -3.32237, 1e-4},
                        Case{"trid12", -352.0, 1e-6}}) {
    const TestFunction f = lookup_function(c.name);
    for (const Point& x : f.minimizers) {
      if (std::abs(f(x) - c.minimum) > c.tol) {
        why = std::string(c.name) + " gives " + fmt("%.8f", f(x));
        return false;
      }
    }
  }
  return true;
}

void property_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Item {
    const char* name;
    bool (*fn)(std::string&);
  };
  std::string detail;
  bool ok = true;
  for (const Item& it : {Item{"kriging", kriging_invariants}, Item{"ei", ei_invariants}, Item{"shift", shift_invariants},
                         Item{"resampling", resampling_invariants}, Item{"catalog", catalog_optima}}) {
    std::string why;
    const bool pass = it.fn(why);
    ok = ok && pass;
    detail += std::string(it.name) + (pass ? " ok" : " FAILED (" + why + ")") + "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(ok && secs < 120.0, "6 property-suites", detail + fmt("%.1f s", secs));
}

void determinism() {
  const std::string json = R"({
    "base_seed": 1900, "repetitions": 4,
    "defaults": {"max_stages": 4, "fit_restarts": 3},
    "experiments": [{"function": ["branin", "hartmann3"], "strategy": ["ego", "accelerated", "cl"], "q": 4}]
  })";
  auto bytes = [&](std::size_t parallelism) {
    const fs::path dir = scratch("determinism_" + std::to_string(parallelism));
    run_campaign(parse_campaign(nlohmann::json::parse(json)), dir, {parallelism, {}});
    std::ifstream in(dir / kRunsFile);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove_all(dir);
    return ss.str();
  };
  const std::string a = bytes(1), b = bytes(8), c = bytes(1);
  const bool ok = !a.empty() && a == b && a == c;
  report(ok, "7 determinism",
         std::to_string(std::count(a.begin(), a.end(), '\n')) + " runs, parallelism 1 vs 8 " +
             (a == b ? "identical" : "DIFFER") + ", rerun " + (a == c ? "identical" : "DIFFER"));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only(argv + 1, argv + argc);
  auto want = [&](const char* k) { return only.empty() || only.count(k) > 0; };
  struct Step {
    const char* key;
    void (*fn)();
  };
  for (const Step& s : {Step{"1", branin_convergence}, Step{"1b", sixcamel_constant_liar}, Step{"2", pool_size_insensitivity},
                        Step{"3", batch_speedup}, Step{"4", selection_cost}, Step{"5", high_dimensional},
                        Step{"6", property_suite}, Step{"7", determinism}}) {
    if (!want(s.key)) continue;
    try {
      s.fn();
    } catch (const std::exception& e) {
      report(false, s.key, std::string("exception: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
