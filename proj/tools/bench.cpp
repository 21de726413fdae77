// Command-line front end for benchmark campaigns.
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <aego/bench.hpp>

namespace {

void print_rows(const std::vector<aego::SummaryRow>& rows) {
  std::cout << std::left << std::setw(32) << "spec" << std::right << std::setw(6) << "reps" << std::setw(6) << "fail"
            << std::setw(10) << "mean" << std::setw(9) << "sd" << std::setw(9) << "median" << std::setw(14) << "best"
            << std::setw(12) << "select_s" << std::setw(12) << "total_s" << '\n';
  std::cout << std::fixed;
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(32) << r.spec_id << std::right << std::setw(6) << r.replicates << std::setw(6)
              << r.failed << std::setprecision(2) << std::setw(10) << r.stages.mean << std::setw(9) << r.stages.sd
              << std::setw(9) << r.stages.median << std::setprecision(6) << std::setw(14) << r.best.mean
              << std::setprecision(3) << std::setw(12) << r.select_seconds.mean << std::setw(12) << r.total_seconds.mean
              << '\n';
  }
  std::cout.unsetf(std::ios::fixed);
}

int report(const aego::CampaignResult& res) {
  print_rows(res.rows);
  const std::size_t failed = res.failed();
  if (failed > 0) {
    std::cerr << failed << " replicate(s) failed\n";
    for (const auto& r : res.results) {
      if (!r.ok) std::cerr << "  " << r.id << ": " << r.error_message << '\n';
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch adaptive-design benchmark runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a campaign and write runs.jsonl, timings.jsonl and summary.csv");
  std::string campaign_file, out_dir;
  std::size_t parallelism = 1;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  run->add_option("--campaign", campaign_file, "Campaign JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--parallelism", parallelism, "Concurrent replicates")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Base seed, overriding the campaign file");
  run->add_flag("--quiet", quiet, "No per-replicate progress");

  auto* sum = app.add_subcommand("summarize", "Recompute summary.csv from a result directory");
  std::string sum_dir;
  sum->add_option("dir", sum_dir, "Result directory")->required()->check(CLI::ExistingDirectory);

  auto* list = app.add_subcommand("list-functions", "List catalog test functions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      aego::Campaign c = aego::load_campaign(campaign_file);
      if (seed) c.base_seed = *seed;
      aego::CampaignOptions opt;
      opt.parallelism = parallelism;
      if (!quiet) {
        opt.on_done = [](const aego::ReplicateResult& r) {
          std::cerr << r.id << ' ' << (r.ok ? "ok" : "FAILED") << " stages=" << r.record.stage_count()
                    << " best=" << r.record.best;
          if (!r.ok) std::cerr << " (" << r.error_kind << ')';
          std::cerr << '\n';
        };
      }
      const auto res = aego::run_campaign(c, out_dir, opt);
      if (res.resumed > 0 && !quiet) std::cerr << res.resumed << " replicate(s) reused from earlier runs\n";
      return report(res);
    }
    if (*sum) return report(aego::summarize(sum_dir));
    if (*list) {
      for (const auto& name : aego::function_names()) {
        const auto f = aego::lookup_function(name);
        std::cout << std::left << std::setw(12) << name << " dim=" << std::setw(3) << f.dim() << " minimum=" << f.minimum
                  << '\n';
      }
      std::cout << "parametric: ackley<s>, levy<s>, trid<s>\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
