#include "mads/eval_engine.hpp"

#include <doctest.h>

#include <chrono>
#include <set>
#include <thread>

using namespace mads;

namespace {

TrialPoint trial(std::initializer_list<double> x, std::optional<Point> dir = std::nullopt) {
  TrialPoint t;
  t.x = Point(static_cast<Eigen::Index>(x.size()));
  Eigen::Index i = 0;
  for (double v : x) t.x[i++] = v;
  t.generator = Generator::Poll;
  t.direction = std::move(dir);
  return t;
}

struct Fixture {
  Cache cache;
  Budget budget{1000};
  EvalLog log;
  Barrier barrier{BarrierKind::Extreme, {}};
  EvalContext ctx() { return EvalContext{&cache, &budget, &log, nullptr, {}, 0}; }
};

Evaluator sum_eval() {
  return [](const Point& x) { return Evaluation::ok(x.sum()); };
}

}  // namespace

TEST_CASE("queue skips cached and pending duplicates") {
  Cache cache;
  cache.insert(Point{{1.0}}, Evaluation::ok(0.0));
  EvalQueue q(OrderingStrategy::GenerationOrder);
  CHECK_FALSE(q.push(cache, trial({1.0})));
  CHECK(q.push(cache, trial({2.0})));
  CHECK_FALSE(q.push(cache, trial({2.0})));
  CHECK(q.size() == 1);
}

TEST_CASE("ordering strategies") {
  Cache cache;
  SUBCASE("generation order") {
    EvalQueue q(OrderingStrategy::GenerationOrder);
    for (double v : {3.0, 1.0, 2.0}) q.push(cache, trial({v}));
    q.sort();
    CHECK(q.pending()[0].x[0] == 3.0);
    CHECK(q.pending()[2].x[0] == 2.0);
  }
  SUBCASE("lexicographic") {
    EvalQueue q(OrderingStrategy::Lexicographic);
    for (double v : {3.0, 1.0, 2.0}) q.push(cache, trial({v, 0.0}));
    q.sort();
    CHECK(q.pending()[0].x[0] == 1.0);
    CHECK(q.pending()[2].x[0] == 3.0);
  }
  SUBCASE("last success direction by cosine") {
    EvalQueue q(OrderingStrategy::LastSuccessDirection);
    q.push(cache, trial({0.0, 1.0}, Point{{0.0, 1.0}}));
    q.push(cache, trial({-1.0, 0.0}, Point{{-1.0, 0.0}}));
    q.push(cache, trial({5.0, 5.0}));
    q.push(cache, trial({1.0, 0.0}, Point{{1.0, 0.0}}));
    q.set_last_success_direction(Point{{1.0, 0.1}});
    q.sort();
    CHECK(q.pending()[0].x[0] == 1.0);
    CHECK(q.pending()[1].x[1] == 1.0);
    CHECK(q.pending()[2].x[0] == -1.0);
    CHECK(q.pending()[3].x[0] == 5.0);
  }
  SUBCASE("random is reproducible per seed") {
    std::vector<double> first, second;
    for (auto* out : {&first, &second}) {
      EvalQueue q(OrderingStrategy::Random, 42);
      for (int i = 0; i < 20; ++i) q.push(cache, trial({double(i)}));
      q.sort();
      for (const auto& t : q.pending()) out->push_back(t.x[0]);
    }
    CHECK(first == second);
  }
}

TEST_CASE("group dispatch keeps queue order") {
  Cache cache;
  EvalQueue q(OrderingStrategy::GenerationOrder);
  for (int i = 0; i < 7; ++i) q.push(cache, trial({double(i)}));
  auto batches = group_dispatch(q, 3);
  REQUIRE(batches.size() == 3);
  CHECK(batches[0].size() == 3);
  CHECK(batches[2].size() == 1);
  CHECK(batches[2][0].x[0] == 6.0);
  CHECK(q.empty());
}

TEST_CASE("budget with a parent") {
  Budget global(3);
  Budget session(2, &global);
  CHECK(session.try_acquire());
  CHECK(session.try_acquire());
  CHECK_FALSE(session.try_acquire());
  CHECK(global.used() == 2);
  Budget other(5, &global);
  CHECK(other.try_acquire());
  CHECK_FALSE(other.try_acquire());
  CHECK(other.exhausted());
}

TEST_CASE("opportunistic run stops after a full success") {
  Fixture fx;
  fx.barrier.classify(Point{{0.0}}, Evaluation::ok(0.0));
  EvalEngine engine(batch_of(sum_eval(), 0), 0, 1, 1);
  EvalQueue q(OrderingStrategy::GenerationOrder);
  for (double v : {1.0, -1.0, -2.0, 3.0}) q.push(fx.cache, trial({v}));
  auto r = engine.run_queue(q, fx.barrier, fx.ctx(), true);
  CHECK(r.records.size() == 2);
  CHECK(r.reason == StopReason::OpportunisticSuccess);
  CHECK(r.best() == SuccessKind::Full);
  CHECK(q.empty());

  for (double v : {1.0, -1.0, -2.0, 3.0}) q.push(fx.cache, trial({v}));
  auto all = engine.run_queue(q, fx.barrier, fx.ctx(), false);
  CHECK(all.records.size() == 2);  // 1 and -1 are cached
  CHECK(all.reason == StopReason::QueueEmpty);
  CHECK(fx.cache.size() == 4);
}

TEST_CASE("budget exhaustion stops dispatch") {
  Fixture fx;
  fx.budget.set_limit(2);
  EvalEngine engine(batch_of(sum_eval(), 0), 0, 1, 1);
  EvalQueue q(OrderingStrategy::GenerationOrder);
  for (double v : {1.0, 2.0, 3.0}) q.push(fx.cache, trial({v}));
  auto r = engine.run_queue(q, fx.barrier, fx.ctx(), false);
  CHECK(r.records.size() == 2);
  CHECK(r.reason == StopReason::BudgetExhausted);
  CHECK(fx.cache.size() == 2);
}

TEST_CASE("exceptions and malformed outputs become failures") {
  Fixture fx;
  Evaluator bad = [](const Point& x) -> Evaluation {
    if (x[0] > 1.5) throw std::runtime_error("crash");
    return Evaluation::ok(x[0], {1.0, 2.0});  // wrong constraint count
  };
  EvalEngine engine(batch_of(bad, 0), 0, 1, 1);
  EvalQueue q(OrderingStrategy::GenerationOrder);
  for (double v : {1.0, 2.0}) q.push(fx.cache, trial({v}));
  auto r = engine.run_queue(q, fx.barrier, fx.ctx(), false);
  REQUIRE(r.records.size() == 2);
  CHECK_FALSE(r.records[0].eval.is_ok());
  CHECK_FALSE(r.records[1].eval.is_ok());
}

TEST_CASE("parallel workers evaluate every point once and log in order") {
  Fixture fx;
  std::atomic<int> calls{0};
  Evaluator slow = [&](const Point& x) {
    calls.fetch_add(1);
    std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<int>(x[0]) % 3));
    return Evaluation::ok(x[0]);
  };
  std::vector<std::int64_t> seen;
  fx.log.add_observer([&](const EvalRecord& r) { seen.push_back(r.eval_index); });
  fx.barrier.classify(Point{{-1.0}}, Evaluation::ok(-1.0));
  EvalEngine engine(batch_of(slow, 0), 0, 4, 2);
  EvalQueue q(OrderingStrategy::GenerationOrder);
  for (int i = 0; i < 40; ++i) q.push(fx.cache, trial({double(i)}));
  auto r = engine.run_queue(q, fx.barrier, fx.ctx(), false);
  CHECK(r.records.size() == 40);
  CHECK(calls.load() == 40);
  REQUIRE(seen.size() == 40);
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == static_cast<std::int64_t>(i) + 1);
}

TEST_CASE("opportunism with in-flight evaluations records them") {
  Fixture fx;
  fx.barrier.classify(Point{{0.0}}, Evaluation::ok(0.0));
  Evaluator slow = [](const Point& x) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    return Evaluation::ok(x[0]);
  };
  EvalEngine engine(batch_of(slow, 0), 0, 4, 1);
  EvalQueue q(OrderingStrategy::GenerationOrder);
  for (double v : {-1.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0}) q.push(fx.cache, trial({v}));
  auto r = engine.run_queue(q, fx.barrier, fx.ctx(), true);
  CHECK(r.reason == StopReason::OpportunisticSuccess);
  CHECK(r.records.size() >= 1);
  CHECK(r.records.size() < 8);
  CHECK(fx.cache.size() == r.records.size());
  CHECK(q.empty());
}

TEST_CASE("user interrupt stops new dispatches") {
  Fixture fx;
  std::atomic<bool> stop{false};
  Evaluator eval = [&](const Point& x) {
    if (x[0] == 2.0) stop = true;
    return Evaluation::ok(x[0]);
  };
  EvalEngine engine(batch_of(eval, 0), 0, 1, 1);
  EvalQueue q(OrderingStrategy::GenerationOrder);
  for (double v : {1.0, 2.0, 3.0, 4.0}) q.push(fx.cache, trial({v}));
  auto ctx = fx.ctx();
  ctx.interrupt = &stop;
  auto r = engine.run_queue(q, fx.barrier, ctx, false);
  CHECK(r.records.size() == 2);
  CHECK(r.reason == StopReason::UserInterrupt);
}
