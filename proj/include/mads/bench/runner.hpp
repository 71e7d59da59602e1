#pragma once

#include "mads/bench/problems.hpp"
#include "mads/bench/profiles.hpp"

#include <string>
#include <vector>

namespace mads::bench {

/// Solver tags: mads, mads-nosearch, mads-eb, mads-mega, psd.
const std::vector<std::string>& solver_names();

/// 400(n+1) without constraints, 1000(n+1) with.
std::int64_t default_budget(const BenchProblem& p);

/// Runs one (problem, solver, seed) instance. budget <= 0 picks the default.
RunRecord run_solver(const std::string& solver, const BenchProblem& p, std::uint64_t seed,
                     std::int64_t budget = 0, int threads = 1);

/// Problem names of a suite: unconstrained, constrained, srosenbr, all, or a
/// single registered problem.
std::vector<std::string> suite_problems(const std::string& suite);

}  // namespace mads::bench
