#pragma once

#include "mads/mads.hpp"

#include <random>
#include <set>
#include <vector>

namespace mads {

/// Variables a worker optimizes; the others stay at the incumbent values.
struct SubspaceAssignment {
  std::vector<int> indices;  // sorted, distinct
  Point fixed_values;        // full-space point supplying the complement

  Point lift(const Point& sub) const;
  Point restrict(const Point& full) const;
};

/// n_s distinct indices drawn uniformly without replacement.
SubspaceAssignment select_subspace(std::mt19937_64& rng, int n, int n_s, const Point& incumbent);

/// Full-space mesh that bounds the pollster and worker meshes.
struct MasterMesh {
  Mesh mesh;
  std::set<int> coverage;
  int coverage_threshold = 1;
  bool success_since_update = false;
};

struct SessionResult {
  int lane = 0;
  std::vector<int> indices;  // explored variables (all of them for the pollster)
  SuccessKind success = SuccessKind::Failure;
  std::vector<EvalRecord> records;
  std::optional<Incumbent> best_feasible;  // in full space
  std::optional<Incumbent> best_infeasible;
};

/// Accumulates coverage; once it reaches the threshold the master frame is
/// enlarged if any session succeeded since the last update, refined
/// otherwise, and coverage is reset. Returns true when the mesh changed.
bool master_update(MasterMesh& master, const SessionResult& session);

struct PsdParams {
  int n_mt = 4;                     // lane 0 is the pollster, the rest are workers
  int n_s = 2;
  std::int64_t worker_budget = 40;  // evaluations per worker session
  int coverage_threshold = 0;       // 0 means n
};

/// Global incumbent view shared by the lanes.
struct PsdShared {
  ValidatedProblem problem;
  Params params;
  MadsEnvironment env;  // shared cache, global budget and log
};

/// One pollster session: a full-space Mads whose single iteration evaluates
/// only the first poll point in queue order.
SessionResult pollster_run(const PsdShared& shared, const MasterMesh& master,
                           const Barrier& incumbents, std::uint64_t seed, int n_workers = 1);

/// One worker session: Mads on the subproblem, trial points lifted to the
/// full space before evaluation and caching.
SessionResult worker_run(const PsdShared& shared, const SubspaceAssignment& assignment,
                         const MasterMesh& master, const Barrier& incumbents,
                         std::int64_t budget, std::uint64_t seed, int n_workers = 1,
                         int lane = 1);

struct MasterRecord {
  std::int64_t evals = 0;
  double frame = 0.0;
  double delta = 0.0;
  bool enlarged = false;
};

struct PsdResult {
  std::optional<Incumbent> best_feasible;
  std::optional<Incumbent> best_infeasible;
  std::int64_t eval_count = 0;
  std::int64_t sessions = 0;
  std::vector<MasterRecord> master_history;
  StopReason stop = StopReason::BudgetExhausted;
};

/// Asynchronous PSD-MADS: n_mt lanes share the cache; the coordinating
/// context merges session results and updates the master mesh. Threads
/// beyond n_mt (params.n_workers - n_mt) become extra evaluation workers
/// handed out round-robin to the worker lanes.
PsdResult psd_run(const ValidatedProblem& p, const Params& params, const PsdParams& psd,
                  MadsEnvironment env = {});

}  // namespace mads
