#pragma once

#include "mads/cli/param_file.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mads::cli {

enum ExitCode { kExitOk = 0, kExitParams = 2, kExitIo = 3 };

/// Attaches the evaluator named by BB_EXE: builtin:<problem> or an
/// executable, relative paths resolved against base_dir.
Problem bind_blackbox(const SolveConfig& cfg, const std::string& base_dir);

struct SolveOptions {
  std::string param_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> cache;
  std::optional<std::string> csv_dir;
  int checkpoint_every = 25;  // iterations between cache file writes
};

int solve_command(const SolveOptions& opts, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::string suite;
  std::vector<std::string> solvers{"mads"};
  int seeds = 5;
  double tau = 1e-2;
  std::int64_t budget = 0;  // 0: per-problem default
  std::optional<std::string> csv_dir;
};

int bench_command(const BenchOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace mads::cli
