#include "mads/bench/runner.hpp"
#include "mads/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  using namespace mads::cli;
  CLI::App app{"MADS blackbox optimizer"};
  app.require_subcommand(1);

  SolveOptions solve;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string cache, csv;
  auto* s = app.add_subcommand("solve", "solve the problem described by a parameter file");
  s->add_option("paramfile", solve.param_file)->required();
  auto* seed_opt = s->add_option("--seed", seed);
  auto* threads_opt = s->add_option("--threads", threads)->check(CLI::PositiveNumber);
  auto* cache_opt = s->add_option("--cache", cache);
  auto* csv_opt = s->add_option("--csv", csv, "directory for history.csv");

  BenchOptions bench;
  std::string solvers = "mads";
  std::string bench_csv;
  auto* b = app.add_subcommand("bench", "run a benchmark suite and print data profiles");
  b->add_option("suite", bench.suite, "unconstrained, constrained, srosenbr, all or a problem name")
      ->required();
  b->add_option("--solvers", solvers, "comma separated: mads, mads-nosearch, mads-eb, mads-mega, psd");
  b->add_option("--seeds", bench.seeds)->check(CLI::PositiveNumber);
  b->add_option("--tau", bench.tau);
  b->add_option("--budget", bench.budget);
  auto* bench_csv_opt = b->add_option("--csv", bench_csv, "directory for profile and envelope CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParams;
  }

  if (s->parsed()) {
    if (*seed_opt) solve.seed = seed;
    if (*threads_opt) solve.threads = threads;
    if (*cache_opt) solve.cache = cache;
    if (*csv_opt) solve.csv_dir = csv;
    return solve_command(solve, std::cout, std::cerr);
  }
  bench.solvers.clear();
  std::stringstream ss(solvers);
  for (std::string t; std::getline(ss, t, ',');)
    if (!t.empty()) bench.solvers.push_back(t);
  if (*bench_csv_opt) bench.csv_dir = bench_csv;
  return bench_command(bench, std::cout, std::cerr);
}
