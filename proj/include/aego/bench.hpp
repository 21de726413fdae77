#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"
#include "kriging.hpp"
#include "qmc.hpp"
#include "strategies.hpp"
#include "subprocess.hpp"
#include "testfns.hpp"

namespace aego {

class CampaignError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Campaign description

struct ExternalProblem {
  ExternalSpec process;
  Domain domain;
  std::optional<double> minimum;
};

/// Stage cap applied when an experiment sets neither max_updates nor max_stages.
inline constexpr std::size_t kDefaultMaxStages = 100;

struct ExperimentSpec {
  std::string id;
  std::string function;  // catalog name, or a label for an external objective
  StrategyKind strategy = StrategyKind::ego;
  std::size_t q = 1;
  std::size_t pool_size = 0;  // 0: default for the function
  std::size_t initial = 0;    // 0: default for the function
  std::optional<double> epsilon;
  std::optional<std::size_t> max_updates;  // evaluations after the initial design
  std::optional<std::size_t> max_stages;
  std::size_t repetitions = 25;
  Lie lie;
  KernelFamily kernel = KernelFamily::gaussian;
  std::size_t fit_restarts = 10;
  std::optional<std::string> pool_file;
  std::optional<ExternalProblem> external;
};

struct Campaign {
  std::uint64_t base_seed = 0;
  std::vector<ExperimentSpec> experiments;
};

/// Initial-design size and pool size used when an experiment leaves them unset.
inline std::pair<std::size_t, std::size_t> default_sizes(const std::string& function, std::size_t dim) {
  static const std::map<std::string, std::pair<std::size_t, std::size_t>> table{
      {"branin", {21, 100}},    {"sixcamel", {21, 100}},  {"goldprice", {21, 100}}, {"sin2", {21, 100}},
      {"ackley_toy", {21, 100}}, {"hartmann3", {35, 150}}, {"hartmann6", {65, 300}}, {"ackley10", {100, 750}},
      {"levy10", {100, 750}},    {"trid12", {120, 1000}},
  };
  if (const auto it = table.find(function); it != table.end()) return it->second;
  return {10 * dim + 1, default_pool_size(dim)};
}

namespace detail {

inline const std::set<std::string>& experiment_keys() {
  static const std::set<std::string> keys{"id",          "function",   "strategy", "q",         "pool_size",
                                          "initial",     "epsilon",    "max_updates", "max_stages", "repetitions",
                                          "lie",         "kernel",     "fit_restarts", "pool_file", "external"};
  return keys;
}

inline Lie parse_lie(const nlohmann::json& j) {
  if (j.is_number()) return {LieKind::value, j.get<double>()};
  const auto s = j.get<std::string>();
  if (s == "min") return {LieKind::min, 0.0};
  if (s == "max") return {LieKind::max, 0.0};
  throw CampaignError("lie must be \"min\", \"max\" or a number");
}

inline nlohmann::json lie_json(const Lie& lie) {
  switch (lie.kind) {
    case LieKind::min: return "min";
    case LieKind::max: return "max";
    case LieKind::value: return lie.value;
  }
  return "min";
}

inline Point json_vector(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline ExternalProblem parse_external(const nlohmann::json& j) {
  ExternalProblem p{{}, Domain(json_vector(j.at("lower")), json_vector(j.at("upper"))), std::nullopt};
  const auto& cmd = j.at("command");
  if (cmd.is_string()) {
    p.process.argv = {"/bin/sh", "-c", cmd.get<std::string>()};
  } else {
    p.process.argv = cmd.get<std::vector<std::string>>();
  }
  p.process.dim = p.domain.dim();
  p.process.timeout_seconds = j.value("timeout", 60.0);
  p.process.max_in_flight = j.value("max_in_flight", std::size_t{1});
  if (j.contains("minimum")) p.minimum = j["minimum"].get<double>();
  return p;
}

inline ExperimentSpec parse_experiment(const nlohmann::json& j, std::size_t default_reps) {
  for (const auto& [key, _] : j.items()) {
    if (!experiment_keys().contains(key)) throw CampaignError("unknown experiment key '" + key + "'");
  }
  ExperimentSpec e;
  e.function = j.at("function").get<std::string>();
  e.strategy = strategy_from_string(j.value("strategy", std::string("ego")));
  e.q = j.value("q", std::size_t{1});
  e.pool_size = j.value("pool_size", std::size_t{0});
  e.initial = j.value("initial", std::size_t{0});
  if (j.contains("epsilon")) e.epsilon = j["epsilon"].get<double>();
  if (j.contains("max_updates")) e.max_updates = j["max_updates"].get<std::size_t>();
  if (j.contains("max_stages")) e.max_stages = j["max_stages"].get<std::size_t>();
  e.repetitions = j.value("repetitions", default_reps);
  if (j.contains("lie")) e.lie = parse_lie(j["lie"]);
  e.kernel = kernel_family_from_string(j.value("kernel", std::string("gaussian")));
  e.fit_restarts = j.value("fit_restarts", std::size_t{10});
  if (j.contains("pool_file")) e.pool_file = j["pool_file"].get<std::string>();
  if (j.contains("external")) e.external = parse_external(j["external"]);
  if (e.strategy == StrategyKind::ego) e.q = 1;
  if (e.q == 0) throw CampaignError("q must be at least 1");
  if (e.strategy == StrategyKind::constant_liar && e.q < 2) throw CampaignError("constant liar needs q >= 2");

  std::size_t dim = 0;
  if (e.external) {
    dim = e.external->domain.dim();
  } else {
    dim = lookup_function(e.function).dim();
  }
  const auto [n0, m0] = default_sizes(e.function, dim);
  if (e.initial == 0) e.initial = n0;
  if (e.pool_size == 0) e.pool_size = m0;
  const bool has_minimum = e.external ? e.external->minimum.has_value() : true;
  if (!e.epsilon && !e.max_updates && !e.max_stages && has_minimum) e.epsilon = 1e-2;
  if (!e.max_updates && !e.max_stages) e.max_stages = kDefaultMaxStages;

  if (j.contains("id")) {
    e.id = j["id"].get<std::string>();
  } else {
    e.id = e.function + "-" + to_string(e.strategy) + "-q" + std::to_string(e.q);
    if (e.strategy == StrategyKind::accelerated) e.id += "-m" + std::to_string(e.pool_size);
  }
  return e;
}

// Expands array values of function, strategy, q and pool_size into one
// experiment per combination.
inline std::vector<nlohmann::json> expand_grid(const nlohmann::json& j) {
  std::vector<nlohmann::json> out{j};
  for (const char* key : {"function", "strategy", "q", "pool_size"}) {
    if (!j.contains(key) || !j[key].is_array()) continue;
    std::vector<nlohmann::json> next;
    for (const auto& partial : out) {
      for (const auto& v : j[key]) {
        nlohmann::json e = partial;
        e[key] = v;
        if (e.contains("id")) {
          const std::string tag = v.is_string() ? v.get<std::string>() : v.dump();
          const std::string prefix = std::string(key) == "q" ? "q" : std::string(key) == "pool_size" ? "m" : "";
          e["id"] = e["id"].get<std::string>() + "-" + prefix + tag;
        }
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Builds a campaign from its JSON form:
///
///     {"base_seed": 1, "repetitions": 25,
///      "defaults": {"epsilon": 0.01},
///      "experiments": [{"function": "branin", "strategy": "accelerated", "q": [4, 8]}]}
///
/// Array values of function, strategy, q and pool_size expand into a grid.
inline Campaign parse_campaign(const nlohmann::json& j) {
  for (const auto& [key, _] : j.items()) {
    if (key != "base_seed" && key != "repetitions" && key != "defaults" && key != "experiments") {
      throw CampaignError("unknown campaign key '" + key + "'");
    }
  }
  Campaign c;
  c.base_seed = j.value("base_seed", std::uint64_t{0});
  const std::size_t reps = j.value("repetitions", std::size_t{25});
  const nlohmann::json defaults = j.value("defaults", nlohmann::json::object());
  std::set<std::string> ids;
  for (const auto& raw : j.at("experiments")) {
    nlohmann::json merged = defaults;
    merged.update(raw);
    for (const auto& e : detail::expand_grid(merged)) {
      ExperimentSpec spec = detail::parse_experiment(e, reps);
      if (!ids.insert(spec.id).second) throw CampaignError("duplicate experiment id '" + spec.id + "'");
      c.experiments.push_back(std::move(spec));
    }
  }
  return c;
}

inline Campaign load_campaign(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CampaignError("cannot open campaign file '" + path + "'");
  try {
    return parse_campaign(nlohmann::json::parse(in, nullptr, true, true));
  } catch (const nlohmann::json::exception& e) {
    throw CampaignError("campaign file '" + path + "': " + e.what());
  }
}

/// Settings snapshot stored with every raw record.
inline nlohmann::json config_json(const ExperimentSpec& e) {
  nlohmann::json j{{"function", e.function},
                   {"strategy", to_string(e.strategy)},
                   {"q", e.q},
                   {"pool_size", e.pool_size},
                   {"initial", e.initial},
                   {"repetitions", e.repetitions},
                   {"lie", detail::lie_json(e.lie)},
                   {"kernel", to_string(e.kernel)},
                   {"fit_restarts", e.fit_restarts}};
  j["epsilon"] = e.epsilon ? nlohmann::json(*e.epsilon) : nlohmann::json();
  j["max_updates"] = e.max_updates ? nlohmann::json(*e.max_updates) : nlohmann::json();
  j["max_stages"] = e.max_stages ? nlohmann::json(*e.max_stages) : nlohmann::json();
  if (e.pool_file) j["pool_file"] = *e.pool_file;
  if (e.external) j["external"] = e.external->process.argv;
  return j;
}

// ---------------------------------------------------------------------------
// Replicates

struct ReplicateResult {
  std::string id;  // "<experiment id>/<replicate>"
  std::string spec_id;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error_kind;
  std::string error_message;
  RunRecord record;
  nlohmann::json config;
};

inline std::string replicate_id(const ExperimentSpec& e, std::size_t r) { return e.id + "/" + std::to_string(r); }

inline StopRule stop_rule_for(const ExperimentSpec& e, std::optional<double> minimum) {
  StopRule rule;
  if (e.epsilon) {
    if (!minimum) throw CampaignError("experiment '" + e.id + "' uses epsilon but the objective has no known minimum");
    rule.known_minimum = minimum;
    rule.epsilon = *e.epsilon;
  }
  if (e.max_updates) rule.max_evaluations = e.initial + *e.max_updates;
  if (e.max_stages) rule.max_stages = *e.max_stages;
  rule.validate();
  return rule;
}

/// Runs one replicate. Seed = base_seed + replicate index; the initial design
/// and the strategy draw from independent child streams of that seed.
inline ReplicateResult run_replicate(const ExperimentSpec& e, std::size_t r, std::uint64_t base_seed) {
  ReplicateResult out;
  out.id = replicate_id(e, r);
  out.spec_id = e.id;
  out.replicate = r;
  out.seed = base_seed + r;
  out.config = config_json(e);
  out.record.strategy = e.strategy;
  out.record.q = e.q;

  try {
    std::optional<TestFunction> fn;
    std::optional<Domain> domain;
    std::optional<double> minimum;
    Objective objective = [&] {
      if (e.external) {
        domain = e.external->domain;
        minimum = e.external->minimum;
        return external_objective(e.external->process);
      }
      fn = lookup_function(e.function);
      domain = fn->domain;
      minimum = fn->minimum;
      return Objective(fn->evaluate);
    }();
    const StopRule stop = stop_rule_for(e, minimum);

    const SeededRng root(out.seed);
    SeededRng design_rng = root.split(0);
    const SeededRng run_rng = root.split(1);
    const CandidatePool start = lhs_initial_design(e.initial, *domain, design_rng);
    const Design initial = evaluate_initial(objective, start.points, *domain);

    StrategyOptions opt;
    opt.fit.family = e.kernel;
    opt.fit.restarts = e.fit_restarts;
    switch (e.strategy) {
      case StrategyKind::ego:
        out.record = run_ego(objective, initial, stop, run_rng, opt);
        break;
      case StrategyKind::accelerated: {
        const CandidatePool pool = e.pool_file ? read_pool_csv(*e.pool_file, *domain) : sobol_pool(e.pool_size, *domain);
        out.record = run_accelerated_ego(objective, initial, pool, e.q, stop, run_rng, opt);
        break;
      }
      case StrategyKind::constant_liar:
        out.record = run_constant_liar(objective, initial, e.q, e.lie, stop, run_rng, opt);
        break;
    }
  } catch (const RunAborted& a) {
    out.ok = false;
    out.error_kind = a.kind();
    out.error_message = a.what();
    out.record = a.partial();
  } catch (const std::exception& ex) {
    out.ok = false;
    out.error_kind = detail::error_kind(ex);
    out.error_message = ex.what();
  }
  return out;
}

/// One raw JSON line. Wall-clock data is kept out so reruns are byte-identical.
inline nlohmann::json replicate_json(const ReplicateResult& r) {
  nlohmann::json j{{"id", r.id},           {"spec", r.spec_id}, {"replicate", r.replicate},
                   {"seed", r.seed},       {"config", r.config}, {"status", r.ok ? "ok" : "failed"}};
  j["error"] = r.ok ? nlohmann::json() : nlohmann::json{{"kind", r.error_kind}, {"message", r.error_message}};
  j["record"] = to_json(r.record);
  return j;
}

inline ReplicateResult replicate_from_json(const nlohmann::json& j) {
  ReplicateResult r;
  r.id = j.at("id").get<std::string>();
  r.spec_id = j.at("spec").get<std::string>();
  r.replicate = j.at("replicate").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config");
  r.ok = j.at("status").get<std::string>() == "ok";
  if (!r.ok && j.at("error").is_object()) {
    r.error_kind = j["error"].value("kind", std::string());
    r.error_message = j["error"].value("message", std::string());
  }
  r.record = run_record_from_json(j.at("record"));
  return r;
}

/// Attaches stage timings from a timings line to a record read back from disk.
inline void apply_timings(RunRecord& rec, const nlohmann::json& t) {
  const auto& stages = t.at("stages");
  for (std::size_t i = 0; i < rec.stages.size() && i < stages.size(); ++i) {
    rec.stages[i].timing = {stages[i].at("fit").get<double>(), stages[i].at("select").get<double>(),
                            stages[i].at("eval").get<double>()};
  }
}

// ---------------------------------------------------------------------------
// Summaries

struct Stats {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
  double median = std::numeric_limits<double>::quiet_NaN();
};

/// Mean, sample standard deviation (n - 1) and median. Values are summed in
/// the given order.
inline Stats describe(std::vector<double> v) {
  Stats s;
  if (v.empty()) return s;
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  s.median = v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  return s;
}

struct SummaryRow {
  std::string spec_id;
  std::string function;
  std::string strategy;
  std::size_t q = 1;
  std::size_t pool_size = 0;
  std::size_t initial = 0;
  std::size_t replicates = 0;
  std::size_t failed = 0;
  Stats stages;
  Stats best;
  Stats select_seconds;  // selection after the model fit
  Stats fit_seconds;
  Stats total_seconds;   // fit + selection + evaluation
};

/// Groups results by experiment, in first-seen order. Failed replicates are
/// counted but left out of the statistics.
inline std::vector<SummaryRow> summarize_results(const std::vector<ReplicateResult>& results) {
  std::vector<SummaryRow> rows;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<const ReplicateResult*>> groups;
  for (const auto& r : results) {
    auto [it, inserted] = index.emplace(r.spec_id, rows.size());
    if (inserted) {
      SummaryRow row;
      row.spec_id = r.spec_id;
      row.function = r.config.value("function", std::string());
      row.strategy = r.config.value("strategy", std::string());
      row.q = r.config.value("q", std::size_t{1});
      row.pool_size = r.config.value("pool_size", std::size_t{0});
      row.initial = r.config.value("initial", std::size_t{0});
      rows.push_back(std::move(row));
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    std::vector<double> stages, best, sel, fit, total;
    for (const auto* r : groups[g]) {
      ++rows[g].replicates;
      if (!r->ok) {
        ++rows[g].failed;
        continue;
      }
      const StageTiming t = r->record.total_timing();
      stages.push_back(static_cast<double>(r->record.stage_count()));
      best.push_back(r->record.best);
      sel.push_back(t.select_seconds);
      fit.push_back(t.fit_seconds);
      total.push_back(t.fit_seconds + t.select_seconds + t.eval_seconds);
    }
    rows[g].stages = describe(stages);
    rows[g].best = describe(best);
    rows[g].select_seconds = describe(sel);
    rows[g].fit_seconds = describe(fit);
    rows[g].total_seconds = describe(total);
  }
  return rows;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "spec,function,strategy,q,pool_size,initial,replicates,failed,"
        "stages_mean,stages_sd,stages_median,best_mean,best_sd,"
        "select_seconds_mean,select_seconds_sd,fit_seconds_mean,fit_seconds_sd,total_seconds_mean,total_seconds_sd\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  auto num = [&](double v) -> std::ostream& {
    if (std::isfinite(v)) os << v;
    return os;
  };
  for (const auto& r : rows) {
    os << r.spec_id << ',' << r.function << ',' << r.strategy << ',' << r.q << ',' << r.pool_size << ',' << r.initial
       << ',' << r.replicates << ',' << r.failed;
    for (const Stats* s : {&r.stages, &r.best}) {
      os << ',';
      num(s->mean) << ',';
      num(s->sd);
      if (s == &r.stages) {
        os << ',';
        num(s->median);
      }
    }
    for (const Stats* s : {&r.select_seconds, &r.fit_seconds, &r.total_seconds}) {
      os << ',';
      num(s->mean) << ',';
      num(s->sd);
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Campaign execution

inline constexpr const char* kRunsFile = "runs.jsonl";
inline constexpr const char* kTimingsFile = "timings.jsonl";
inline constexpr const char* kSummaryFile = "summary.csv";

struct CampaignResult {
  std::vector<ReplicateResult> results;  // campaign order
  std::vector<SummaryRow> rows;
  std::size_t resumed = 0;
  std::size_t failed() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.ok; }));
  }
};

namespace detail {

// id -> line, keeping the exact bytes. Unparsable lines (an interrupted
// write) are dropped.
inline std::map<std::string, std::string> read_lines_by_id(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("id").get<std::string>()] = line;
    } catch (const std::exception&) {
    }
  }
  return out;
}

inline void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CampaignError("cannot write '" + tmp.string() + "'");
    body(out);
  }
  std::filesystem::rename(tmp, path);
}

inline nlohmann::json timing_line(const ReplicateResult& r) {
  nlohmann::json j = timings_json(r.record);
  j["id"] = r.id;
  return j;
}

}  // namespace detail

struct CampaignOptions {
  std::size_t parallelism = 1;
  std::function<void(const ReplicateResult&)> on_done;  // called under a lock
};

/// Runs every replicate not already recorded as ok in `out_dir`, then rewrites
/// runs.jsonl and timings.jsonl in campaign order and writes summary.csv.
/// Finished replicates are appended as they complete so an interrupted
/// campaign resumes where it stopped.
inline CampaignResult run_campaign(const Campaign& c, const std::filesystem::path& out_dir, const CampaignOptions& opt = {}) {
  std::filesystem::create_directories(out_dir);
  const auto runs_path = out_dir / kRunsFile;
  const auto timings_path = out_dir / kTimingsFile;

  auto run_lines = detail::read_lines_by_id(runs_path);
  auto timing_lines = detail::read_lines_by_id(timings_path);

  struct Task {
    const ExperimentSpec* spec;
    std::size_t replicate;
    std::string id;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> todo;
  CampaignResult result;
  for (const auto& e : c.experiments) {
    for (std::size_t r = 0; r < e.repetitions; ++r) {
      tasks.push_back({&e, r, replicate_id(e, r)});
      const auto it = run_lines.find(tasks.back().id);
      const bool done = it != run_lines.end() && nlohmann::json::parse(it->second).value("status", "") == "ok";
      if (done) {
        ++result.resumed;
      } else {
        todo.push_back(tasks.size() - 1);
      }
    }
  }

  std::mutex mu;
  {
    std::ofstream runs_out(runs_path, std::ios::app);
    std::ofstream timings_out(timings_path, std::ios::app);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= todo.size()) return;
        const Task& t = tasks[todo[k]];
        ReplicateResult r = run_replicate(*t.spec, t.replicate, c.base_seed);
        const std::string line = replicate_json(r).dump();
        const std::string tline = detail::timing_line(r).dump();
        std::lock_guard<std::mutex> lock(mu);
        runs_out << line << '\n' << std::flush;
        timings_out << tline << '\n' << std::flush;
        run_lines[t.id] = line;
        timing_lines[t.id] = tline;
        if (opt.on_done) opt.on_done(r);
      }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(opt.parallelism, todo.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  detail::write_atomically(runs_path, [&](std::ostream& os) {
    for (const auto& t : tasks) os << run_lines.at(t.id) << '\n';
  });
  detail::write_atomically(timings_path, [&](std::ostream& os) {
    for (const auto& t : tasks) {
      if (const auto it = timing_lines.find(t.id); it != timing_lines.end()) os << it->second << '\n';
    }
  });

  for (const auto& t : tasks) {
    ReplicateResult r = replicate_from_json(nlohmann::json::parse(run_lines.at(t.id)));
    if (const auto it = timing_lines.find(t.id); it != timing_lines.end()) apply_timings(r.record, nlohmann::json::parse(it->second));
    result.results.push_back(std::move(r));
  }
  result.rows = summarize_results(result.results);
  detail::write_atomically(out_dir / kSummaryFile, [&](std::ostream& os) { write_summary_csv(os, result.rows); });
  return result;
}

/// Re-reads the raw files in `dir`, rewrites summary.csv and returns the rows.
inline CampaignResult summarize(const std::filesystem::path& dir) {
  const auto runs_path = dir / kRunsFile;
  if (!std::filesystem::exists(runs_path)) throw CampaignError("no " + std::string(kRunsFile) + " in '" + dir.string() + "'");
  const auto timing_lines = detail::read_lines_by_id(dir / kTimingsFile);
  CampaignResult result;
  std::ifstream in(runs_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ReplicateResult r = replicate_from_json(nlohmann::json::parse(line));
    if (const auto it = timing_lines.find(r.id); it != timing_lines.end()) apply_timings(r.record, nlohmann::json::parse(it->second));
    result.results.push_back(std::move(r));
  }
  result.rows = summarize_results(result.results);
  detail::write_atomically(dir / kSummaryFile, [&](std::ostream& os) { write_summary_csv(os, result.rows); });
  return result;
}

}  // namespace aego
