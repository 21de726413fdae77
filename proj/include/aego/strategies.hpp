#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "acquisition.hpp"
#include "core.hpp"
#include "kriging.hpp"
#include "qmc.hpp"
#include "sir.hpp"

namespace aego {

// ---------------------------------------------------------------------------
// Stop rules

enum class StopReason { none, target, budget, max_stages };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::target: return "target";
    case StopReason::budget: return "budget";
    case StopReason::max_stages: return "max_stages";
  }
  return "none";
}

inline StopReason stop_reason_from_string(const std::string& s) {
  if (s == "target") return StopReason::target;
  if (s == "budget") return StopReason::budget;
  if (s == "max_stages") return StopReason::max_stages;
  return StopReason::none;
}

/// Any-of combination of a target gap |best - M| < epsilon, a cap on total
/// evaluations (initial design included), and a cap on stages.
struct StopRule {
  std::optional<double> known_minimum;
  double epsilon = 0.0;
  std::optional<std::size_t> max_evaluations;
  std::optional<std::size_t> max_stages;

  static StopRule target(double minimum, double eps) { return {minimum, eps, std::nullopt, std::nullopt}; }
  static StopRule budget(std::size_t total) { return {std::nullopt, 0.0, total, std::nullopt}; }
  static StopRule stages(std::size_t k) { return {std::nullopt, 0.0, std::nullopt, k}; }

  StopRule& or_budget(std::size_t total) {
    max_evaluations = total;
    return *this;
  }
  StopRule& or_stages(std::size_t k) {
    max_stages = k;
    return *this;
  }

  void validate() const {
    if (!known_minimum && !max_evaluations && !max_stages) throw Error("stop rule has no condition");
    if (known_minimum && !(epsilon > 0.0)) throw Error("target-gap stop rule needs epsilon > 0");
  }

  StopReason check(double best, std::size_t evaluations, std::size_t stages_done) const {
    if (known_minimum && std::abs(best - *known_minimum) < epsilon) return StopReason::target;
    if (max_evaluations && evaluations >= *max_evaluations) return StopReason::budget;
    if (max_stages && stages_done >= *max_stages) return StopReason::max_stages;
    return StopReason::none;
  }

  /// Points still allowed this stage, capped at q.
  std::size_t batch_allowance(std::size_t q, std::size_t evaluations) const {
    if (!max_evaluations) return q;
    return std::min(q, *max_evaluations - std::min(*max_evaluations, evaluations));
  }
};

// ---------------------------------------------------------------------------
// Records

enum class StrategyKind { ego, accelerated, constant_liar };

inline const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::ego: return "ego";
    case StrategyKind::accelerated: return "accelerated";
    case StrategyKind::constant_liar: return "cl";
  }
  return "ego";
}

inline StrategyKind strategy_from_string(const std::string& s) {
  if (s == "ego") return StrategyKind::ego;
  if (s == "accelerated" || s == "aego") return StrategyKind::accelerated;
  if (s == "cl" || s == "constant_liar" || s == "cl_min") return StrategyKind::constant_liar;
  throw Error("unknown strategy '" + s + "'");
}

enum class LieKind { min, max, value };

struct Lie {
  LieKind kind = LieKind::min;
  double value = 0.0;

  double resolve(const Design& d) const {
    switch (kind) {
      case LieKind::min: return d.best();
      case LieKind::max: return *std::max_element(d.responses().begin(), d.responses().end());
      case LieKind::value: return value;
    }
    return d.best();
  }
};

struct StageTiming {
  double fit_seconds = 0.0;
  double select_seconds = 0.0;
  double eval_seconds = 0.0;
};

struct StageResult {
  std::size_t index = 0;
  Point argmax;
  double argmax_ei = 0.0;
  std::vector<Point> resampled;
  std::vector<double> resampled_weights;
  bool degenerate_weights = false;
  std::vector<Point> batch;  // evaluation order: argmax first
  std::vector<double> responses;
  double best = 0.0;
  Eigen::VectorXd theta;  // fitted lengthscales this stage
  StageTiming timing;
};

struct RunRecord {
  StrategyKind strategy = StrategyKind::ego;
  std::size_t q = 1;
  std::uint64_t seed = 0;
  std::vector<Point> initial_points;
  std::vector<double> initial_responses;
  std::vector<StageResult> stages;
  StopReason stop = StopReason::none;
  std::size_t total_evaluations = 0;
  double best = std::numeric_limits<double>::infinity();
  Point best_point;

  std::size_t stage_count() const { return stages.size(); }

  StageTiming total_timing() const {
    StageTiming t;
    for (const auto& s : stages) {
      t.fit_seconds += s.timing.fit_seconds;
      t.select_seconds += s.timing.select_seconds;
      t.eval_seconds += s.timing.eval_seconds;
    }
    return t;
  }
};

/// A strategy stopped on an error; carries the trace up to the failure.
class RunAborted : public Error {
 public:
  RunAborted(RunRecord partial, std::string kind, const std::string& what)
      : Error(kind + ": " + what), partial_(std::move(partial)), kind_(std::move(kind)) {}
  const RunRecord& partial() const { return partial_; }
  const std::string& kind() const { return kind_; }

 private:
  RunRecord partial_;
  std::string kind_;
};

struct StrategyOptions {
  FitOptions fit;
  MaximizerOptions maximizer;
  bool warm_start = true;  // previous stage's lengthscales join the MLE starts
};

/// Evaluates a set of points through the objective and returns the design.
inline Design evaluate_initial(Objective& f, const Eigen::MatrixXd& points, const Domain& domain) {
  std::vector<Point> xs;
  for (Eigen::Index i = 0; i < points.rows(); ++i) xs.push_back(points.row(i).transpose());
  const auto ys = f.evaluate(xs);
  Design d(domain);
  for (std::size_t i = 0; i < xs.size(); ++i) d.add(xs[i], ys[i], Origin::initial);
  return d;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const SingularCorrelation*>(&e)) return "SingularCorrelation";
  if (dynamic_cast<const PoolExhausted*>(&e)) return "PoolExhausted";
  if (dynamic_cast<const TooFewPoints*>(&e)) return "TooFewPoints";
  if (dynamic_cast<const DuplicatePoint*>(&e)) return "DuplicatePoint";
  if (const auto* ev = dynamic_cast<const EvaluationError*>(&e)) return ev->kind();
  return "EvaluationError";
}

struct Selection {
  Point argmax;
  double argmax_ei = 0.0;
  std::vector<Point> resampled;
  std::vector<double> weights;
  bool degenerate = false;
  std::vector<Point> batch;
};

/// Shared stage loop: stop check, fit, select, evaluate, append.
template <typename Select>
RunRecord run_loop(StrategyKind kind, std::size_t q, Objective& f, const Design& initial, const StopRule& stop,
                   const SeededRng& rng, const StrategyOptions& opt, Select&& select) {
  stop.validate();
  RunRecord rec;
  rec.strategy = kind;
  rec.q = q;
  rec.seed = rng.seed();
  rec.initial_points = initial.points();
  rec.initial_responses = initial.responses();
  rec.total_evaluations = initial.size();
  Design design = initial;
  auto sync_best = [&] {
    rec.best = design.best();
    rec.best_point = design.point(design.best_index());
  };
  sync_best();

  std::optional<Eigen::VectorXd> previous_theta;
  for (std::size_t stage = 0;; ++stage) {
    rec.stop = stop.check(design.best(), rec.total_evaluations, stage);
    if (rec.stop != StopReason::none) break;
    const std::size_t allowance = stop.batch_allowance(q, rec.total_evaluations);

    const SeededRng stage_rng = rng.split(stage);
    StageResult sr;
    sr.index = stage;
    try {
      auto t0 = Clock::now();
      FitOptions fo = opt.fit;
      if (opt.warm_start && previous_theta) fo.warm_start = previous_theta;
      SeededRng fit_rng = stage_rng.split(0);
      const KrigingModel model = KrigingModel::fit(design, fit_rng, fo);
      sr.timing.fit_seconds = seconds_since(t0);
      sr.theta = model.kernel().theta;
      previous_theta = model.kernel().theta;

      t0 = Clock::now();
      Selection sel = select(model, design, allowance, stage_rng);
      sr.timing.select_seconds = seconds_since(t0);
      sr.argmax = sel.argmax;
      sr.argmax_ei = sel.argmax_ei;
      sr.resampled = std::move(sel.resampled);
      sr.resampled_weights = std::move(sel.weights);
      sr.degenerate_weights = sel.degenerate;
      sr.batch = std::move(sel.batch);

      t0 = Clock::now();
      rec.total_evaluations += sr.batch.size();
      sr.responses = f.evaluate(sr.batch);
      sr.timing.eval_seconds = seconds_since(t0);
      for (std::size_t i = 0; i < sr.batch.size(); ++i) {
        design.add(sr.batch[i], sr.responses[i], i == 0 ? Origin::argmax : Origin::resampled);
      }
    } catch (const std::exception& e) {
      sync_best();
      throw RunAborted(std::move(rec), error_kind(e), e.what());
    }
    sync_best();
    sr.best = design.best();
    rec.stages.push_back(std::move(sr));
  }
  return rec;
}

}  // namespace detail

/// Serial EGO: one EI maximizer per stage.
inline RunRecord run_ego(Objective& f, const Design& initial, const StopRule& stop, const SeededRng& rng,
                         const StrategyOptions& opt = {}) {
  return detail::run_loop(StrategyKind::ego, 1, f, initial, stop, rng, opt,
                          [&](const KrigingModel& model, const Design&, std::size_t, const SeededRng& srng) {
                            const EiContext ctx(model);
                            SeededRng mrng = srng.split(2);
                            const EiCandidate best = maximize_ei(ctx, mrng, opt.maximizer);
                            detail::Selection sel;
                            sel.argmax = best.x;
                            sel.argmax_ei = best.ei;
                            sel.batch = {best.x};
                            return sel;
                          });
}

/// Accelerated EGO: the EI maximizer plus q - 1 points resampled from the
/// randomly shifted pool with EI-proportional weights. q = 1 is plain EGO.
inline RunRecord run_accelerated_ego(Objective& f, const Design& initial, const CandidatePool& pool, std::size_t q,
                                     const StopRule& stop, const SeededRng& rng, const StrategyOptions& opt = {}) {
  if (q == 1) return run_ego(f, initial, stop, rng, opt);
  if (q < 1) throw Error("batch size must be at least 1");
  if (pool.size() < q) throw PoolExhausted("pool smaller than batch size");
  return detail::run_loop(
      StrategyKind::accelerated, q, f, initial, stop, rng, opt,
      [&](const KrigingModel& model, const Design& design, std::size_t allowance, const SeededRng& srng) {
        const EiContext ctx(model);
        SeededRng shift_rng = srng.split(1);
        const ShiftedPool shifted = random_shift(pool, design.domain(), shift_rng);
        SeededRng mrng = srng.split(2);
        const EiCandidate best = maximize_ei(ctx, mrng, opt.maximizer, shifted.points);
        detail::Selection sel;
        sel.argmax = best.x;
        sel.argmax_ei = best.ei;
        sel.batch = {best.x};
        if (allowance > 1) {
          const WeightedPool wp = weigh(shifted, ctx);
          sel.degenerate = wp.degenerate;
          std::vector<Point> exclusions = design.points();
          exclusions.push_back(best.x);
          SeededRng rrng = srng.split(3);
          for (auto& d : resample(wp, allowance - 1, rrng, exclusions, design.domain())) {
            sel.resampled.push_back(d.x);
            sel.weights.push_back(d.weight);
            sel.batch.push_back(std::move(d.x));
          }
        }
        return sel;
      });
}

/// Constant Liar: q sequential EI maximizations, each conditioning the model
/// (stage lengthscales kept) on the previous picks with a fake response.
inline RunRecord run_constant_liar(Objective& f, const Design& initial, std::size_t q, Lie lie, const StopRule& stop,
                                   const SeededRng& rng, const StrategyOptions& opt = {}) {
  if (q < 1) throw Error("batch size must be at least 1");
  return detail::run_loop(
      StrategyKind::constant_liar, q, f, initial, stop, rng, opt,
      [&](const KrigingModel& model, const Design& design, std::size_t allowance, const SeededRng& srng) {
        detail::Selection sel;
        const double lie_value = lie.resolve(design);
        Design augmented = design;
        std::optional<KrigingModel> conditioned;
        for (std::size_t j = 0; j < allowance; ++j) {
          if (j > 0) {
            Kernel k = model.kernel();
            k.nugget = kJitterStart;
            conditioned.emplace(KrigingModel::condition(augmented, std::move(k)));
          }
          const EiContext ctx(j == 0 ? model : *conditioned);
          SeededRng mrng = srng.split(2 + j);
          const auto ranked = rank_ei_candidates(ctx, mrng, opt.maximizer);
          std::size_t failures = 0;
          const EiCandidate* chosen = nullptr;
          for (const auto& c : ranked) {
            if (!augmented.is_duplicate(c.x)) {
              chosen = &c;
              break;
            }
            if (++failures >= 3) break;
          }
          if (!chosen) throw PoolExhausted("constant liar could not find a non-duplicate maximizer");
          if (j == 0) {
            sel.argmax = chosen->x;
            sel.argmax_ei = chosen->ei;
          }
          sel.batch.push_back(chosen->x);
          augmented.add(chosen->x, lie_value, Origin::liar);
        }
        return sel;
      });
}

// ---------------------------------------------------------------------------
// Serialization. Wall-clock fields go through timings_json, not to_json.

namespace detail {

inline nlohmann::json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline nlohmann::json points_json(const std::vector<Point>& ps) {
  auto a = nlohmann::json::array();
  for (const auto& p : ps) a.push_back(vec_json(p));
  return a;
}

inline Point json_point(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<Point> json_points(const nlohmann::json& j) {
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(json_point(p));
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j;
  j["strategy"] = to_string(r.strategy);
  j["q"] = r.q;
  j["seed"] = r.seed;
  j["initial"] = {{"points", detail::points_json(r.initial_points)}, {"responses", r.initial_responses}};
  auto& stages = j["stages"] = nlohmann::json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"index", s.index},
                      {"argmax", detail::vec_json(s.argmax)},
                      {"argmax_ei", s.argmax_ei},
                      {"resampled", detail::points_json(s.resampled)},
                      {"resampled_weights", s.resampled_weights},
                      {"degenerate_weights", s.degenerate_weights},
                      {"batch", detail::points_json(s.batch)},
                      {"responses", s.responses},
                      {"best", s.best},
                      {"theta", detail::vec_json(s.theta)}});
  }
  j["stop"] = to_string(r.stop);
  j["totals"] = {{"stages", r.stage_count()},
                 {"evaluations", r.total_evaluations},
                 {"best", r.best},
                 {"best_point", detail::vec_json(r.best_point)}};
  return j;
}

inline RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  r.q = j.at("q").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.initial_points = detail::json_points(j.at("initial").at("points"));
  r.initial_responses = j.at("initial").at("responses").get<std::vector<double>>();
  for (const auto& js : j.at("stages")) {
    StageResult s;
    s.index = js.at("index").get<std::size_t>();
    s.argmax = detail::json_point(js.at("argmax"));
    s.argmax_ei = js.at("argmax_ei").get<double>();
    s.resampled = detail::json_points(js.at("resampled"));
    s.resampled_weights = js.at("resampled_weights").get<std::vector<double>>();
    s.degenerate_weights = js.at("degenerate_weights").get<bool>();
    s.batch = detail::json_points(js.at("batch"));
    s.responses = js.at("responses").get<std::vector<double>>();
    s.best = js.at("best").get<double>();
    s.theta = detail::json_point(js.at("theta"));
    r.stages.push_back(std::move(s));
  }
  r.stop = stop_reason_from_string(j.at("stop").get<std::string>());
  r.total_evaluations = j.at("totals").at("evaluations").get<std::size_t>();
  r.best = j.at("totals").at("best").get<double>();
  r.best_point = detail::json_point(j.at("totals").at("best_point"));
  return r;
}

inline nlohmann::json timings_json(const RunRecord& r) {
  auto stages = nlohmann::json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"fit", s.timing.fit_seconds}, {"select", s.timing.select_seconds}, {"eval", s.timing.eval_seconds}});
  }
  const StageTiming t = r.total_timing();
  return {{"stages", stages}, {"fit", t.fit_seconds}, {"select", t.select_seconds}, {"eval", t.eval_seconds}};
}

/// One row per stage: index, batch size, best so far, argmax EI, and timings.
inline void write_stage_csv(std::ostream& os, const RunRecord& r) {
  os << "stage,batch_size,best,argmax_ei,degenerate_weights,fit_seconds,select_seconds,eval_seconds\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& s : r.stages) {
    os << s.index << ',' << s.batch.size() << ',' << s.best << ',' << s.argmax_ei << ',' << (s.degenerate_weights ? 1 : 0)
       << ',' << s.timing.fit_seconds << ',' << s.timing.select_seconds << ',' << s.timing.eval_seconds << '\n';
  }
}

}  // namespace aego
