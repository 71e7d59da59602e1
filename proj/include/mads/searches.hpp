#pragma once

#include "mads/barrier.hpp"
#include "mads/eval_queue.hpp"
#include "mads/mads.hpp"
#include "mads/mesh.hpp"

#include <optional>
#include <random>
#include <span>
#include <vector>

namespace mads {

/// Clips x to the bounds and projects it on the mesh. Empty when the
/// projection falls back outside the bounds.
std::optional<Point> snap_to_mesh(const Point& x, const Mesh& mesh, const Point& lb,
                                  const Point& ub);

/// Frame center plus delta times each Ortho-2n direction.
std::vector<TrialPoint> poll_points(const Mesh& mesh, std::mt19937_64& rng, const Point& lb,
                                    const Point& ub);

/// center + 2^(i-1) d for i = 1..count, d being the last success direction.
std::vector<TrialPoint> speculative_search_points(const Mesh& mesh,
                                                  const std::optional<Point>& last_direction,
                                                  int count, const Point& lb, const Point& ub);

/// Latin hypercube sample of `count` points in the box [lb, ub]: every one of
/// the count equal-width strata of each coordinate holds exactly one point.
std::vector<Point> latin_hypercube(int count, const Point& lb, const Point& ub,
                                   std::mt19937_64& rng);

/// LH trial points. Infinite bounds are replaced by the box x0 +- 10 delta0.
/// Points are projected on the mesh only when one is given.
std::vector<TrialPoint> lh_search_points(const ValidatedProblem& p, int count,
                                         std::mt19937_64& rng, double delta0,
                                         const Mesh* mesh);

struct SimplexCandidates {
  Point reflection;
  Point expansion;
  Point outside_contraction;
  Point inside_contraction;
};

/// Nelder-Mead candidates for a simplex ordered best first, worst last.
/// Empty when the simplex is degenerate.
std::optional<SimplexCandidates> nm_candidates(std::span<const Point> simplex);

/// n+1 best evaluated points in barrier order: feasible by f, then
/// infeasible by h. Failed and h = inf points are skipped.
std::vector<Point> best_simplex(std::span<const HistoryEntry> history, const Barrier& barrier,
                                int n);

std::vector<TrialPoint> nm_search_points(std::span<const HistoryEntry> history,
                                         const Barrier& barrier, const Mesh& mesh, int max_points,
                                         const Point& lb, const Point& ub);

/// Quadratic-model search: fits models of f and the PB constraints around
/// the frame center and optimizes them with a nested Mads.
std::vector<TrialPoint> quad_model_search_points(const Mads& outer, int* nested_depth = nullptr);

/// Every enabled search generator followed by the poll, deduplicated.
std::vector<TrialPoint> mega_search_poll_points(Mads& mads);

}  // namespace mads
