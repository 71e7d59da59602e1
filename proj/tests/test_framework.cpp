#include "mads/mads.hpp"
#include "mads/step.hpp"

#include <doctest.h>

#include <cmath>

using namespace mads;

namespace {

ValidatedProblem sphere(int n, double start = 3.0) {
  Problem p;
  p.n = n;
  p.x0 = {Point::Constant(n, start)};
  p.lower = Point::Constant(n, -10.0);
  p.upper = Point::Constant(n, 10.0);
  p.evaluator = [](const Point& x) { return Evaluation::ok(x.squaredNorm()); };
  return validate_problem(p);
}

Params base(const ValidatedProblem& p, std::uint64_t seed, std::int64_t budget) {
  Params params = default_params(p);
  params.seed = seed;
  params.max_bb_eval = budget;
  return params;
}

}  // namespace

TEST_CASE("step paths and error context") {
  TaskStep root("Mads", {}, {}, {});
  TaskStep child("Iteration", {}, {}, {}, &root);
  TaskStep leaf(
      "Poll", {}, [](const TaskStep&) { throw Error(ErrorCode::InvalidParams, "boom"); }, {},
      &child);
  CHECK(leaf.path() == "Mads/Iteration/Poll");
  try {
    leaf.execute();
    FAIL("expected ComponentError");
  } catch (const ComponentError& e) {
    CHECK(e.path() == "Mads/Iteration/Poll");
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("step hooks run in order") {
  std::string trace;
  TaskStep s(
      "S", [&](const TaskStep&) { trace += "s"; }, [&](const TaskStep&) { trace += "r"; },
      [&](const TaskStep&) { trace += "e"; });
  s.execute();
  CHECK(trace == "sre");
}

TEST_CASE("iterations follow the mesh law") {
  auto p = sphere(3);
  auto params = base(p, 7, 2000);
  auto r = mads_run(p, params);
  REQUIRE(!r.iterations.empty());
  for (const auto& it : r.iterations) {
    CHECK(it.delta == std::min(it.frame, it.frame * it.frame));
    switch (it.success) {
      case SuccessKind::Full: CHECK(it.frame_next == it.frame / params.tau); break;
      case SuccessKind::Failure: CHECK(it.frame_next == it.frame * params.tau); break;
      case SuccessKind::Partial: CHECK(it.frame_next == it.frame); break;
    }
  }
}

TEST_CASE("default mads converges on a sphere") {
  auto p = sphere(2);
  auto r = mads_run(p, base(p, 1, 1200));
  REQUIRE(r.best_feasible);
  CHECK(r.best_feasible->eval.f <= 1e-4 * 18.0);
  CHECK(r.eval_count <= 1200);
}

TEST_CASE("single worker runs are deterministic") {
  auto p = sphere(4);
  auto a = mads_run(p, base(p, 5, 300));
  auto b = mads_run(p, base(p, 5, 300));
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i)
    CHECK((a.records[i].full_x.array() == b.records[i].full_x.array()).all());
}

TEST_CASE("termination reasons") {
  auto p = sphere(2);
  auto params = base(p, 0, 50);
  CHECK(mads_run(p, params).stop == StopReason::BudgetExhausted);
  params.max_bb_eval = 100000;
  params.eps_stop = 1e-3;
  CHECK(mads_run(p, params).stop == StopReason::MeshTolerance);

  MadsState st;
  st.mesh = make_mesh(Point::Zero(1), 1.0, 0.5);
  Budget b(10);
  std::atomic<bool> stop{true};
  CHECK(check_termination(st, Params{}, b, &stop) == StopReason::UserInterrupt);
}

TEST_CASE("unevaluable start") {
  Problem p;
  p.n = 1;
  p.x0 = {Point::Zero(1)};
  p.evaluator = [](const Point&) -> Evaluation { throw std::runtime_error("down"); };
  auto v = validate_problem(p);
  try {
    mads_run(v, default_params(v));
    FAIL("expected NoEvaluableStart");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoEvaluableStart);
  }
}

TEST_CASE("frame cap and minimum mesh size") {
  Mesh m = make_mesh(Point::Zero(1), 1.0, 0.5);
  Params params;
  params.frame_cap = 1.0;
  CHECK(update_frame(m, SuccessKind::Full, params).frame == 1.0);
  CHECK(update_frame(m, SuccessKind::Failure, params).frame == 0.5);
  CHECK(update_frame(m, SuccessKind::Partial, params).frame == 1.0);

  auto p = sphere(2);
  auto run = base(p, 0, 10000);
  run.min_mesh_size = 0.01;
  auto r = mads_run(p, run);
  CHECK(r.stop == StopReason::MeshTolerance);
  CHECK(r.iterations.back().delta_next < 0.01);
}

TEST_CASE("progressive barrier reaches feasibility") {
  Problem p;
  p.n = 2;
  p.m = 1;
  p.output_kinds = {OutputKind::Obj, OutputKind::Pb};
  p.x0 = {Point{{3.0, 3.0}}};
  p.evaluator = [](const Point& x) { return Evaluation::ok(x[0] + x[1], {x.squaredNorm() - 1.0}); };
  auto v = validate_problem(p);
  auto r = mads_run(v, base(v, 2, 1500));
  REQUIRE(r.best_feasible);
  CHECK(r.best_feasible->h == 0.0);
  CHECK(r.best_feasible->eval.f == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("snapshot and restore continue the same trajectory") {
  auto p = sphere(3);
  auto params = base(p, 9, 200);
  auto full = mads_run(p, params);

  auto short_params = params;
  short_params.max_bb_eval = 80;
  Mads first(p, short_params, make_environment(p, short_params));
  first.execute();
  auto snap = first.snapshot();
  CHECK(snap.eval_count == 80);

  auto second = warm_restart(p, snap, params);
  second->execute();
  CHECK(second->environment().cache->size() == full.records.size());
  CHECK(second->environment().budget->used() == 200);
  CHECK(second->result().eval_count == 120);
}

TEST_CASE("warm restart checks compatibility") {
  auto p = sphere(3);
  Mads m(p, base(p, 0, 20), make_environment(p, base(p, 0, 20)));
  m.execute();
  auto snap = m.snapshot();
  auto q = sphere(2);
  CHECK_THROWS_AS(warm_restart(q, snap, base(q, 0, 40)), Error);
}

TEST_CASE("warm restart after mesh tolerance resets the frame") {
  auto p = sphere(2);
  auto params = base(p, 0, 100000);
  params.eps_stop = 1e-4;
  Mads m(p, params, make_environment(p, params));
  m.execute();
  REQUIRE(m.result().stop == StopReason::MeshTolerance);
  auto snap = m.snapshot();
  auto next = params;
  next.eps_stop = 1e-6;
  auto r = warm_restart(p, snap, next);
  CHECK(r->state().mesh.frame == params.delta0 / 10.0);
  CHECK_FALSE(r->state().stop.has_value());
}

TEST_CASE("iteration hook can change parameters") {
  auto p = sphere(2);
  auto params = base(p, 0, 30);
  Mads m(p, params, make_environment(p, params));
  bool raised = false;
  m.set_iteration_hook([&](Mads& mads) {
    if (!raised && mads.environment().budget->used() >= 20) {
      auto next = mads.params();
      next.max_bb_eval = 60;
      mads.set_params(next);
      raised = true;
    }
  });
  m.execute();
  CHECK(raised);
  CHECK(m.environment().budget->used() == 60);
}
