#include "mads/searches.hpp"

#include "mads/quad_model.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <numeric>

namespace mads {

std::optional<Point> snap_to_mesh(const Point& x, const Mesh& mesh, const Point& lb,
                                  const Point& ub) {
  const Point clipped = x.cwiseMax(lb).cwiseMin(ub);
  Point projected = project_to_mesh(clipped, mesh);
  if ((projected.array() < lb.array()).any() || (projected.array() > ub.array()).any())
    return std::nullopt;
  return projected;
}

namespace {

TrialPoint make_trial(Point x, Generator g, std::optional<Point> direction,
                      const std::shared_ptr<const Mesh>& mesh) {
  TrialPoint t;
  t.x = std::move(x);
  t.generator = g;
  t.direction = std::move(direction);
  t.mesh = mesh;
  return t;
}

bool contains_point(const std::vector<TrialPoint>& v, const Point& x) {
  return std::any_of(v.begin(), v.end(),
                     [&](const TrialPoint& t) { return (t.x.array() == x.array()).all(); });
}

}  // namespace

std::vector<TrialPoint> poll_points(const Mesh& mesh, std::mt19937_64& rng, const Point& lb,
                                    const Point& ub) {
  auto snapshot = std::make_shared<const Mesh>(mesh);
  const MatrixX<double> dirs = ortho_2n_directions(mesh.center.size(), rng, mesh);
  std::vector<TrialPoint> out;
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
    const Point step = mesh.delta * dirs.col(j);
    auto x = snap_to_mesh(mesh.center + step, mesh, lb, ub);
    if (!x || (x->array() == mesh.center.array()).all() || contains_point(out, *x)) continue;
    out.push_back(make_trial(std::move(*x), Generator::Poll, step, snapshot));
  }
  return out;
}

std::vector<TrialPoint> speculative_search_points(const Mesh& mesh,
                                                  const std::optional<Point>& last_direction,
                                                  int count, const Point& lb, const Point& ub) {
  std::vector<TrialPoint> out;
  if (!last_direction || last_direction->isZero(0.0)) return out;
  auto snapshot = std::make_shared<const Mesh>(mesh);
  double factor = 1.0;
  for (int i = 0; i < count; ++i, factor *= 2.0) {
    const Point step = factor * *last_direction;
    auto x = snap_to_mesh(mesh.center + step, mesh, lb, ub);
    if (!x || (x->array() == mesh.center.array()).all() || contains_point(out, *x)) continue;
    out.push_back(make_trial(std::move(*x), Generator::Speculative, step, snapshot));
  }
  return out;
}

std::vector<Point> latin_hypercube(int count, const Point& lb, const Point& ub,
                                   std::mt19937_64& rng) {
  const auto n = lb.size();
  std::vector<Point> pts(static_cast<std::size_t>(std::max(0, count)), Point(n));
  if (count <= 0) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> strata(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    const double width = (ub[i] - lb[i]) / count;
    for (int p = 0; p < count; ++p) {
      const double u = unit(rng);
      double v = lb[i] + (strata[static_cast<std::size_t>(p)] + u) * width;
      pts[static_cast<std::size_t>(p)][i] = std::min(v, ub[i]);
    }
  }
  return pts;
}

std::vector<TrialPoint> lh_search_points(const ValidatedProblem& p, int count,
                                         std::mt19937_64& rng, double delta0, const Mesh* mesh) {
  Point lb = p.lb();
  Point ub = p.ub();
  const Point& x0 = p.x0.front();
  for (int i = 0; i < p.n; ++i) {
    if (!std::isfinite(lb[i])) lb[i] = x0[i] - 10.0 * delta0;
    if (!std::isfinite(ub[i])) ub[i] = x0[i] + 10.0 * delta0;
  }
  std::shared_ptr<const Mesh> snapshot = mesh ? std::make_shared<const Mesh>(*mesh) : nullptr;
  std::vector<TrialPoint> out;
  for (auto& x : latin_hypercube(count, lb, ub, rng)) {
    if (mesh) {
      auto snapped = snap_to_mesh(x, *mesh, p.lb(), p.ub());
      if (!snapped || contains_point(out, *snapped)) continue;
      x = std::move(*snapped);
    }
    out.push_back(make_trial(std::move(x), Generator::Lh, std::nullopt, snapshot));
  }
  return out;
}

std::optional<SimplexCandidates> nm_candidates(std::span<const Point> simplex) {
  if (simplex.size() < 2) return std::nullopt;
  const auto n = simplex.front().size();
  if (static_cast<Eigen::Index>(simplex.size()) != n + 1) return std::nullopt;
  const Point& worst = simplex.back();

  MatrixX<double> edges(n, n);
  for (Eigen::Index j = 0; j < n; ++j) edges.col(j) = simplex[static_cast<std::size_t>(j)] - worst;
  Eigen::JacobiSVD<MatrixX<double>> svd(edges);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv[0] > 0.0) || sv[sv.size() - 1] <= 1e-10 * sv[0]) return std::nullopt;

  Point centroid = Point::Zero(n);
  for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i];
  centroid /= static_cast<double>(n);
  const Point d = centroid - worst;
  return SimplexCandidates{centroid + d, centroid + 2.0 * d, centroid + 0.5 * d,
                           centroid - 0.5 * d};
}

std::vector<Point> best_simplex(std::span<const HistoryEntry> history, const Barrier& barrier,
                                int n) {
  struct Ranked {
    bool feasible;
    double key;
    std::size_t pos;
  };
  std::vector<Ranked> ranked;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& e = history[i].eval;
    if (!e.is_ok()) continue;
    const double h = barrier.h_of(e);
    if (!std::isfinite(h)) continue;
    if (h == 0.0 && !std::isfinite(e.f)) continue;
    ranked.push_back({h == 0.0, h == 0.0 ? e.f : h, i});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.feasible != b.feasible) return a.feasible;
    return a.key < b.key;
  });
  std::vector<Point> out;
  for (const auto& r : ranked) {
    const Point& x = history[r.pos].x;
    if (std::any_of(out.begin(), out.end(), [&](const Point& y) { return (y.array() == x.array()).all(); }))
      continue;
    out.push_back(x);
    if (static_cast<int>(out.size()) == n + 1) break;
  }
  return out;
}

std::vector<TrialPoint> nm_search_points(std::span<const HistoryEntry> history,
                                         const Barrier& barrier, const Mesh& mesh, int max_points,
                                         const Point& lb, const Point& ub) {
  const int n = static_cast<int>(mesh.center.size());
  std::vector<TrialPoint> out;
  const auto simplex = best_simplex(history, barrier, n);
  if (static_cast<int>(simplex.size()) < n + 1) return out;
  const auto cand = nm_candidates(simplex);
  if (!cand) return out;
  auto snapshot = std::make_shared<const Mesh>(mesh);
  for (const Point* x : {&cand->reflection, &cand->expansion, &cand->outside_contraction,
                         &cand->inside_contraction}) {
    if (static_cast<int>(out.size()) >= max_points) break;
    auto snapped = snap_to_mesh(*x, mesh, lb, ub);
    if (!snapped || (snapped->array() == mesh.center.array()).all() ||
        contains_point(out, *snapped))
      continue;
    Point dir = *snapped - mesh.center;
    out.push_back(make_trial(std::move(*snapped), Generator::Nm, std::move(dir), snapshot));
  }
  return out;
}

std::vector<TrialPoint> quad_model_search_points(const Mads& outer, int* nested_depth) {
  std::vector<TrialPoint> out;
  const auto& state = outer.state();
  const auto& problem = outer.problem();
  const auto& params = outer.params();
  if (!state.barrier.has_incumbent()) return out;

  const Mesh& mesh = state.mesh;
  const Point center = state.barrier.frame_incumbent().x;
  const double radius = 2.0 * mesh.frame;
  const int n = problem.n;
  const int m = problem.m;

  struct Sample {
    double dist;
    std::size_t pos;
  };
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    const auto& h = state.history[i];
    if (!h.eval.is_ok() || !std::isfinite(h.eval.f)) continue;
    if (!std::all_of(h.eval.c.begin(), h.eval.c.end(), [](double c) { return std::isfinite(c); }))
      continue;
    const double dist = (h.x - center).lpNorm<Eigen::Infinity>();
    if (dist <= radius) samples.push_back({dist, i});
  }
  const int full_size = quadratic_basis_size(n);
  ModelBasis basis;
  if (static_cast<int>(samples.size()) >= full_size) basis = ModelBasis::Full;
  else if (static_cast<int>(samples.size()) >= n + 2) basis = ModelBasis::Diagonal;
  else return out;

  const std::size_t keep = static_cast<std::size_t>(3 * full_size);
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.dist < b.dist; });
  if (samples.size() > keep) samples.resize(keep);

  std::vector<Point> xs;
  std::vector<std::vector<double>> ys(static_cast<std::size_t>(1 + m));
  for (const auto& s : samples) {
    const auto& h = state.history[s.pos];
    xs.push_back(h.x);
    ys[0].push_back(h.eval.f);
    for (int j = 0; j < m; ++j) ys[static_cast<std::size_t>(1 + j)].push_back(h.eval.c[static_cast<std::size_t>(j)]);
  }
  std::vector<QuadraticModel> models;
  for (const auto& y : ys) {
    auto model = fit_quadratic_model(xs, y, center, mesh.frame, basis);
    if (!model) return out;
    models.push_back(std::move(*model));
  }

  // Optimize the models inside the sampling box with a nested Mads.
  Problem sub;
  sub.name = problem.name + "/quad-model";
  sub.n = n;
  sub.m = m;
  sub.output_kinds = problem.output_kinds;
  sub.lower = (center.array() - radius).matrix().cwiseMax(problem.lb());
  sub.upper = (center.array() + radius).matrix().cwiseMin(problem.ub());
  sub.x0 = {center};
  if (auto xmin = models[0].minimizer()) {
    Point clipped = xmin->cwiseMax(*sub.lower).cwiseMin(*sub.upper);
    if (!(clipped.array() == center.array()).all()) sub.x0.push_back(clipped);
  }
  sub.evaluator = [models, m](const Point& x) {
    std::vector<double> c(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) c[static_cast<std::size_t>(j)] = models[static_cast<std::size_t>(1 + j)](x);
    return Evaluation::ok(models[0](x), std::move(c));
  };
  const ValidatedProblem nested_problem = validate_problem(sub);

  Params nested = params;
  nested.searches_enabled.erase(SearchKind::Quad);  // no infinite recursion
  nested.searches_enabled.erase(SearchKind::Lh);
  nested.max_bb_eval = params.quad_nested_budget;
  nested.delta0 = mesh.frame / 2.0;
  nested.eps_stop = std::min(params.eps_stop, mesh.delta * 1e-3);
  nested.n_workers = 1;
  nested.group_max_size = 1;
  nested.mega_search_poll = false;
  nested.frame_cap = kInf;
  nested.min_mesh_size = 0.0;
  nested.seed = params.seed + static_cast<std::uint64_t>(state.k) * 7919u + 1u;

  MadsEnvironment env = make_environment(nested_problem, nested);
  Mads inner(nested_problem, nested, env, state.depth + 1, &outer);
  inner.execute();
  if (nested_depth) *nested_depth = std::max(inner.state().max_depth, state.depth + 1);

  const auto& res = inner.result();
  std::vector<Point> candidates;
  if (res.best_feasible) candidates.push_back(res.best_feasible->x);
  if (res.best_infeasible) candidates.push_back(res.best_infeasible->x);
  auto snapshot = std::make_shared<const Mesh>(mesh);
  for (const auto& x : candidates) {
    auto snapped = snap_to_mesh(x, mesh, problem.lb(), problem.ub());
    if (!snapped || (snapped->array() == mesh.center.array()).all() || contains_point(out, *snapped))
      continue;
    Point dir = *snapped - mesh.center;
    out.push_back(make_trial(std::move(*snapped), Generator::Quad, std::move(dir), snapshot));
  }
  return out;
}

std::vector<TrialPoint> mega_search_poll_points(Mads& mads) {
  std::vector<TrialPoint> out;
  for (SearchKind kind : {SearchKind::Speculative, SearchKind::Lh, SearchKind::Nm, SearchKind::Quad}) {
    if (!mads.params().searches_enabled.count(kind)) continue;
    for (auto& t : mads.generate_search(kind))
      if (!contains_point(out, t.x)) out.push_back(std::move(t));
  }
  for (auto& t : mads.generate_poll())
    if (!contains_point(out, t.x)) out.push_back(std::move(t));
  return out;
}

}  // namespace mads
