#include "mads/bench/profiles.hpp"
#include "mads/bench/runner.hpp"
#include "mads/cli/cache_file.hpp"
#include "mads/mads.hpp"
#include "mads/psd.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mads;
using namespace mads::bench;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

/// Runs Mads until `iterations` iterations are done, the budget runs out or
/// the mesh tolerance is hit.
struct BoundedRun {
  std::unique_ptr<Mads> mads;
  std::atomic<bool> stop{false};

  BoundedRun(const ValidatedProblem& p, const Params& params, std::int64_t iterations) {
    MadsEnvironment env = make_environment(p, params);
    env.interrupt = &stop;
    mads = std::make_unique<Mads>(p, params, env);
    mads->set_iteration_hook([this, iterations](Mads& m) {
      if (m.state().k >= iterations) stop = true;
    });
    mads->execute();
  }
  const MadsResult& result() const { return mads->result(); }
};

/// Exact mesh law over the recorded iterations.
std::string mesh_law_violation(const MadsResult& r, double tau) {
  for (std::size_t i = 0; i < r.iterations.size(); ++i) {
    const auto& it = r.iterations[i];
    if (it.delta != std::min(it.frame, it.frame * it.frame))
      return fmt("iteration %zu: delta %.17g frame %.17g", i, it.delta, it.frame);
    double expected = it.frame;
    if (it.success == SuccessKind::Full) expected = it.frame / tau;
    if (it.success == SuccessKind::Failure) expected = it.frame * tau;
    if (it.frame_next != expected)
      return fmt("iteration %zu: frame %.17g -> %.17g", i, it.frame, it.frame_next);
    if (it.delta_next != std::min(it.frame_next, it.frame_next * it.frame_next))
      return fmt("iteration %zu: next delta", i);
    if (i + 1 < r.iterations.size() && r.iterations[i + 1].frame != it.frame_next)
      return fmt("iteration %zu: frame not carried", i);
  }
  return {};
}

// 1. Mesh law.
Verdict mesh_law() {
  const auto p = validate_problem(ProblemRegistry::instance().make("CRESCENT10").problem);
  Params params = default_params(p);
  params.max_bb_eval = 1000000;
  params.eps_stop = 1e-300;
  params.seed = 11;
  BoundedRun run(p, params, 200);
  const auto& r = run.result();
  if (r.iterations.size() != 200) return {false, fmt("%zu iterations", r.iterations.size())};
  const auto bad = mesh_law_violation(r, params.tau);
  if (!bad.empty()) return {false, bad};
  int full = 0, partial = 0, fail = 0;
  for (const auto& it : r.iterations) {
    full += it.success == SuccessKind::Full;
    partial += it.success == SuccessKind::Partial;
    fail += it.success == SuccessKind::Failure;
  }
  return {true, fmt("200 iterations exact (%d full, %d partial, %d failed)", full, partial, fail)};
}

// 2. Positive spanning.
Verdict spanning() {
  int sets = 0;
  for (int n : {1, 2, 5, 10, 20}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(seed);
      const double frame = std::ldexp(1.0, -static_cast<int>(seed % 12));
      const Mesh mesh = make_mesh(Point::Zero(n), frame, 0.5);
      const MatrixX<double> d = ortho_2n_directions(n, rng, mesh);
      std::mt19937_64 wrng(seed + 7919);
      for (int w = 0; w < 1000; ++w) {
        const Point witness = random_unit_vector<double>(n, wrng);
        if (!((d.transpose() * witness).maxCoeff() > 0.0))
          return {false, fmt("n=%d seed=%llu witness %d", n, static_cast<unsigned long long>(seed), w)};
      }
      ++sets;
    }
  }
  return {true, fmt("%d direction sets, 1000 witnesses each", sets)};
}

// 3. Unconstrained convergence.
Verdict convergence() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"Sphere2", "Sphere5", "Sphere10", "SRosenbr2"}) {
    const auto bp = ProblemRegistry::instance().make(name);
    const double f_star = bp.f_best.value_or(0.0);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto rec = run_solver("mads", bp, seed, 400 * (bp.problem.n + 1));
      ok += rec.final_best() <= f_star + 1e-4 * (rec.f0() - f_star);
    }
    pass = pass && ok >= 9;
    detail += fmt("%s %d/10  ", name, ok);
  }
  return {pass, detail};
}

// 4. Progressive barrier on the constrained problems.
Verdict constrained() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"CRESCENT10", "DISK10", "SNAKE"}) {
    const auto bp = ProblemRegistry::instance().make(name);
    const auto p = validate_problem(bp.problem);
    int ok = 0;
    bool monotone = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Params params = default_params(p);
      params.seed = seed;
      params.max_bb_eval = default_budget(bp);
      const auto r = mads_run(p, params);
      ok += r.best_feasible && r.best_feasible->h == 0.0;
      double trace = kInf;
      for (const auto& rec : r.records) {
        if (rec.h != 0.0 || rec.success != SuccessKind::Full) continue;
        if (!(rec.eval.f <= trace)) monotone = false;
        trace = rec.eval.f;
      }
      if (r.best_feasible && r.best_feasible->eval.f > trace) monotone = false;
    }
    pass = pass && ok >= 9 && monotone;
    detail += fmt("%s %d/10%s  ", name, ok, monotone ? "" : " (trace increased)");
  }
  return {pass, detail};
}

// 5. PSD-MADS on SRosenbr50.
Verdict psd() {
  const auto bp = ProblemRegistry::instance().make("SRosenbr50");
  const auto p = validate_problem(bp.problem);
  const double f0 = rosenbrock(p.x0.front());
  std::vector<double> finals;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Params params = default_params(p);
    params.seed = seed;
    params.max_bb_eval = 5000;
    PsdParams psd;
    psd.n_mt = 4;
    psd.n_s = 2;
    const auto r = psd_run(p, params, psd);
    finals.push_back(r.best_feasible ? r.best_feasible->eval.f : kInf);
  }
  std::sort(finals.begin(), finals.end());
  const double median = 0.5 * (finals[14] + finals[15]);
  const bool all_below = finals.back() < f0;
  return {median <= f0 / 100.0 && all_below,
          fmt("median %.4g (target %.4g), worst %.4g, best %.4g, f(x0) %.4g", median, f0 / 100.0,
              finals.back(), finals.front(), f0)};
}

// 6. Opportunism.
Verdict opportunism() {
  const auto bp = ProblemRegistry::instance().make("Sphere5");
  const auto p = validate_problem(bp.problem);
  std::string detail;
  bool pass = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    std::int64_t evals[2] = {0, 0};
    for (int on = 0; on < 2; ++on) {
      Params params = default_params(p);
      params.seed = seed;
      params.max_bb_eval = 1000000;
      params.opportunism = on == 1;
      BoundedRun run(p, params, 50);
      const auto& r = run.result();
      if (r.iterations.size() != 50 || !mesh_law_violation(r, params.tau).empty()) pass = false;
      evals[on] = r.eval_count;
    }
    pass = pass && evals[1] < evals[0];
    detail += fmt("seed %llu: on %lld off %lld  ", static_cast<unsigned long long>(seed),
                  static_cast<long long>(evals[1]), static_cast<long long>(evals[0]));
  }
  return {pass, detail};
}

// 7. Parallel speedup.
Verdict speedup() {
  const auto slow = synthetic_slow_blackbox(ProblemRegistry::instance().make("Sphere10"),
                                            std::chrono::milliseconds(50));
  const auto p = validate_problem(slow.problem);
  double wall[2] = {0.0, 0.0};
  std::int64_t evals[2] = {0, 0};
  const int workers[2] = {1, 8};
  for (int i = 0; i < 2; ++i) {
    Params params = default_params(p);
    params.seed = 5;
    params.max_bb_eval = 400;
    params.mega_search_poll = true;
    params.n_workers = workers[i];
    const auto t0 = Clock::now();
    const auto r = mads_run(p, params);
    wall[i] = seconds_since(t0);
    evals[i] = r.eval_count;
  }
  const double ratio = wall[1] / wall[0];
  return {ratio <= 0.5 && evals[0] == 400 && evals[1] == 400,
          fmt("1 worker %.2f s, 8 workers %.2f s, ratio %.3f", wall[0], wall[1], ratio)};
}

// 8. Determinism and warm restart.
struct CountingProblem {
  ValidatedProblem problem;
  std::shared_ptr<std::mutex> mutex = std::make_shared<std::mutex>();
  std::shared_ptr<std::vector<Point>> evaluated = std::make_shared<std::vector<Point>>();

  CountingProblem() {
    Problem p = ProblemRegistry::instance().make("SRosenbr2").problem;
    auto base = p.evaluator;
    p.evaluator = [base, m = mutex, seen = evaluated](const Point& x) {
      {
        std::lock_guard lock(*m);
        seen->push_back(x);
      }
      return base(x);
    };
    problem = validate_problem(p);
  }
};

Verdict determinism_and_restart() {
  const auto dir = fs::temp_directory_path() / "mads_acceptance";
  fs::create_directories(dir);
  const auto bp = ProblemRegistry::instance().make("SRosenbr2");
  const auto p = validate_problem(bp.problem);
  Params params = default_params(p);
  params.seed = 7;
  params.max_bb_eval = 300;

  std::vector<std::string> texts;
  for (int rep = 0; rep < 3; ++rep) {
    const auto path = (dir / fmt("history_%d.csv", rep)).string();
    write_history_csv(path, history_rows(mads_run(p, params).records));
    std::ifstream in(path, std::ios::binary);
    texts.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  if (texts[0] != texts[1] || texts[0] != texts[2])
    return {false, "history CSVs differ across repetitions"};

  CountingProblem straight;
  Mads full(straight.problem, params, make_environment(straight.problem, params));
  full.execute();
  const std::size_t full_size = full.environment().cache->size();

  CountingProblem interrupted;
  std::atomic<bool> kill{false};
  MadsEnvironment env = make_environment(interrupted.problem, params);
  env.interrupt = &kill;
  env.log->add_observer([&kill](const EvalRecord& r) {
    if (r.eval_index >= 100) kill = true;
  });
  Mads first(interrupted.problem, params, env);
  first.execute();
  const auto killed_at = first.environment().budget->used();

  // The snapshot goes through the cache file text, as after a process kill.
  const auto snap = cli::parse_cache_text(cli::cache_text(first.snapshot()));
  auto resumed = warm_restart(interrupted.problem, snap, params);
  resumed->execute();
  const std::size_t resumed_size = resumed->environment().cache->size();

  std::set<std::vector<double>> distinct;
  for (const auto& x : *interrupted.evaluated) distinct.insert({x.begin(), x.end()});
  const std::size_t duplicates = interrupted.evaluated->size() - distinct.size();

  return {full_size == 300 && resumed_size == full_size && duplicates == 0 && killed_at == 100,
          fmt("3 identical histories (%zu bytes); stopped at %lld, cache %zu vs %zu, %zu duplicates",
              texts[0].size(), static_cast<long long>(killed_at), resumed_size, full_size, duplicates)};
}

// 9. Data profile fixture.
RunRecord fixture_run(const std::string& problem, const std::string& solver, int n,
                      const std::vector<std::pair<std::int64_t, double>>& improvements,
                      std::int64_t length) {
  RunRecord r;
  r.problem = problem;
  r.solver = solver;
  r.n = n;
  double best = kInf;
  std::size_t next = 0;
  for (std::int64_t i = 1; i <= length; ++i) {
    double f = best;
    if (next < improvements.size() && improvements[next].first == i) f = improvements[next++].second;
    best = std::min(best, f);
    r.rows.push_back({i, f, 0.0, best, 0.0});
  }
  return r;
}

Verdict data_profile_fixture() {
  // Hand enumeration, tau = 0.01:
  //   P1 (n=1, f0=10, f_L=0, target 0.1): A solves at eval 3 (ratio 1.5), B at 6 (ratio 3).
  //   P2 (n=2, f0=100, f_L=2, target 2.98): A never, B at eval 9 (ratio 3).
  //   P3 (n=3, f0=1, f_L=0, target 0.01): A at eval 2 (ratio 0.5), B at 8 (ratio 2).
  std::map<std::string, std::vector<RunRecord>> runs;
  runs["A"] = {fixture_run("P1", "A", 1, {{1, 10}, {2, 5}, {3, 0.05}, {4, 0}}, 12),
               fixture_run("P2", "A", 2, {{1, 100}, {2, 50}, {3, 20}}, 12),
               fixture_run("P3", "A", 3, {{1, 1}, {2, 0}}, 12)};
  runs["B"] = {fixture_run("P1", "B", 1, {{1, 10}, {6, 0.1}}, 12),
               fixture_run("P2", "B", 2, {{1, 100}, {5, 40}, {9, 2}}, 12),
               fixture_run("P3", "B", 3, {{1, 1}, {4, 0.5}, {8, 0.005}}, 12)};
  const auto profiles = data_profile(runs, 0.01);

  const double third = 1.0 / 3.0, two_thirds = 2.0 / 3.0;
  const std::vector<std::pair<double, double>> expect_a{
      {0, 0}, {0.49, 0}, {0.5, third}, {1, third}, {1.5, two_thirds}, {3, two_thirds}, {100, two_thirds}};
  const std::vector<std::pair<double, double>> expect_b{
      {0, 0}, {1.5, 0}, {1.99, 0}, {2, third}, {2.99, third}, {3, 1}, {100, 1}};
  const auto& a = profiles.at("A");
  const auto& b = profiles.at("B");
  for (const auto& [kappa, v] : expect_a)
    if (a(kappa) != v) return {false, fmt("A(%g) = %.17g, expected %.17g", kappa, a(kappa), v)};
  for (const auto& [kappa, v] : expect_b)
    if (b(kappa) != v) return {false, fmt("B(%g) = %.17g, expected %.17g", kappa, b(kappa), v)};

  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(i * 0.025);
  for (const auto& [solver, profile] : profiles) {
    const auto curve = profile.curve(grid);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i] < 0.0 || curve[i] > 1.0) return {false, solver + " leaves [0,1]"};
      if (i > 0 && curve[i] < curve[i - 1]) return {false, solver + " decreases"};
    }
  }
  return {true, fmt("%zu checkpoints exact, curves monotone in [0,1]", expect_a.size() + expect_b.size())};
}

// 10. Oracle equivalence with a direct transcription of the basic algorithm.
struct ReferenceTrace {
  std::vector<Point> points;
  std::vector<double> values;
};

ReferenceTrace reference_mads(const std::function<double(const Point&)>& f, Point x, double frame,
                              std::uint64_t seed, int iterations) {
  ReferenceTrace trace;
  std::mt19937_64 rng(seed);
  std::vector<Point> seen{x};
  double fx = f(x);
  trace.points.push_back(x);
  trace.values.push_back(fx);
  auto known = [&](const Point& p, const std::vector<Point>& in) {
    return std::any_of(in.begin(), in.end(), [&](const Point& q) { return (p.array() == q.array()).all(); });
  };
  for (int k = 0; k < iterations; ++k) {
    const double delta = std::min(frame, frame * frame);
    const MatrixX<double> d = ortho_2n_directions(x.size(), rng, Mesh{x, delta, frame, 0.5});
    std::vector<Point> polled;
    bool success = false;
    for (Eigen::Index j = 0; j < d.cols() && !success; ++j) {
      const Point t = x + delta * d.col(j);
      if ((t.array() == x.array()).all() || known(t, polled)) continue;
      polled.push_back(t);
      if (known(t, seen)) continue;
      seen.push_back(t);
      const double ft = f(t);
      trace.points.push_back(t);
      trace.values.push_back(ft);
      if (ft < fx) {
        x = t;
        fx = ft;
        success = true;
      }
    }
    frame = success ? frame * 2.0 : frame * 0.5;
  }
  return trace;
}

Verdict oracle_equivalence() {
  auto objective = [](const Point& x) {
    return rosenbrock(x) + 0.5 * std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]);
  };
  Problem prob;
  prob.name = "oracle";
  prob.n = 2;
  prob.x0 = {Point{{-1.2, 1.0}}};
  prob.evaluator = [objective](const Point& x) { return Evaluation::ok(objective(x)); };
  const auto p = validate_problem(prob);

  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Params params = default_params(p);
    params.seed = seed;
    params.max_bb_eval = 1000000;
    params.delta0 = 1.0;
    params.searches_enabled.clear();
    params.ordering = OrderingStrategy::GenerationOrder;
    params.barrier_kind = BarrierKind::Extreme;
    BoundedRun run(p, params, 50);
    const auto& r = run.result();
    const auto ref = reference_mads(objective, p.x0.front(), params.delta0, seed, 50);
    if (r.iterations.size() != 50) return {false, fmt("seed %llu: %zu iterations", static_cast<unsigned long long>(seed), r.iterations.size())};
    if (r.records.size() != ref.points.size())
      return {false, fmt("seed %llu: %zu evaluations vs %zu", static_cast<unsigned long long>(seed),
                         r.records.size(), ref.points.size())};
    for (std::size_t i = 0; i < ref.points.size(); ++i) {
      if (!(r.records[i].full_x.array() == ref.points[i].array()).all() ||
          r.records[i].eval.f != ref.values[i])
        return {false, fmt("seed %llu: evaluation %zu differs", static_cast<unsigned long long>(seed), i)};
    }
    compared += ref.points.size();
  }
  return {true, fmt("10 seeds, %zu evaluations identical", compared)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  Verdict (*check)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "mesh law", 1.0, mesh_law},
      {2, "positive spanning", 5.0, spanning},
      {3, "unconstrained convergence", 30.0, convergence},
      {4, "constraint handling", 60.0, constrained},
      {5, "PSD-MADS SRosenbr50", 120.0, psd},
      {6, "opportunism", 5.0, opportunism},
      {7, "parallel speedup", 60.0, speedup},
      {8, "determinism and restart", 10.0, determinism_and_restart},
      {9, "data profile fixture", 1.0, data_profile_fixture},
      {10, "oracle equivalence", 5.0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    const bool in_time = elapsed < c.limit_s;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %-27s %7.2fs (limit %gs)%s  %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                elapsed, c.limit_s, in_time ? "" : " over time", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
