#include "mads/barrier.hpp"
#include "mads/cache.hpp"

#include <doctest.h>

#include <thread>

using namespace mads;

namespace {

const std::vector<OutputKind> kPbPb{OutputKind::Pb, OutputKind::Pb};

}  // namespace

TEST_CASE("extreme barrier value") {
  CHECK(extreme_barrier(Evaluation::ok(3.0, {-1.0, 0.0})) == 3.0);
  CHECK(extreme_barrier(Evaluation::ok(3.0, {0.1})) == kInf);
  CHECK(extreme_barrier(Evaluation::failed(1)) == kInf);
}

TEST_CASE("h measure sums squared PB violations") {
  CHECK(h_measure(Evaluation::ok(0.0, {1.0, 2.0, -5.0}), std::vector<OutputKind>(3, OutputKind::Pb)) == 5.0);
  CHECK(h_measure(Evaluation::ok(0.0, {-1.0}), std::vector<OutputKind>{OutputKind::Pb}) == 0.0);
  CHECK(h_measure(Evaluation::ok(0.0, {0.5, -1.0}), std::vector<OutputKind>{OutputKind::Pb, OutputKind::Eb}) == 0.25);
  CHECK(h_measure(Evaluation::ok(0.0, {0.5, 0.1}), std::vector<OutputKind>{OutputKind::Pb, OutputKind::Eb}) == kInf);
  CHECK(h_measure(Evaluation::failed(2), kPbPb) == kInf);
}

TEST_CASE("extreme barrier classification") {
  Barrier b(BarrierKind::Extreme, kPbPb);
  Point x = Point::Zero(1);
  CHECK(b.classify(x, Evaluation::ok(5.0, {-1.0, -1.0})) == SuccessKind::Full);
  CHECK(b.classify(x, Evaluation::ok(1.0, {1.0, -1.0})) == SuccessKind::Failure);
  CHECK(b.classify(x, Evaluation::ok(4.0, {-1.0, -1.0})) == SuccessKind::Full);
  CHECK(b.classify(x, Evaluation::ok(4.0, {-1.0, -1.0})) == SuccessKind::Failure);
  CHECK(b.best_feasible()->f() == 4.0);
  CHECK_FALSE(b.best_infeasible().has_value());
}

TEST_CASE("progressive barrier truth table") {
  Barrier b(BarrierKind::Progressive, kPbPb);
  Point x = Point::Zero(1);
  // First infeasible point.
  CHECK(b.classify(x, Evaluation::ok(10.0, {2.0, 0.0})) == SuccessKind::Full);
  CHECK(b.h_max() == 4.0);
  // h smaller, f smaller: full.
  CHECK(b.classify(x, Evaluation::ok(9.0, {1.5, 0.0})) == SuccessKind::Full);
  CHECK(b.h_max() == 2.25);
  // h above h_max: rejected.
  CHECK(b.classify(x, Evaluation::ok(0.0, {3.0, 0.0})) == SuccessKind::Failure);
  // h smaller, f larger: partial, h_max drops to the largest recorded h below 2.25.
  CHECK(b.classify(x, Evaluation::ok(20.0, {1.0, 0.0})) == SuccessKind::Partial);
  CHECK(b.best_infeasible()->h == 1.0);
  CHECK(b.h_max() == 1.0);
  // h equal to the incumbent: failure.
  CHECK(b.classify(x, Evaluation::ok(0.0, {1.0, 0.0})) == SuccessKind::Failure);
  // Feasible point dominates.
  CHECK(b.classify(x, Evaluation::ok(50.0, {-1.0, -1.0})) == SuccessKind::Full);
  CHECK(b.best_feasible()->f() == 50.0);
  CHECK(b.frame_incumbent().eval.f == 50.0);
  CHECK(b.classify(x, Evaluation::ok(60.0, {-1.0, -1.0})) == SuccessKind::Failure);
  // A failed evaluation never succeeds.
  CHECK(b.classify(x, Evaluation::failed(2)) == SuccessKind::Failure);
}

TEST_CASE("partial success with intermediate recorded h") {
  Barrier b(BarrierKind::Progressive, kPbPb);
  Point x = Point::Zero(1);
  b.classify(x, Evaluation::ok(1.0, {3.0, 0.0}));   // h 9, incumbent
  b.classify(x, Evaluation::ok(5.0, {2.5, 0.0}));   // h 6.25, partial
  CHECK(b.h_max() == 6.25);
  b.classify(x, Evaluation::ok(7.0, {2.0, 0.0}));   // h 4, partial: largest h below 6.25 is 4
  CHECK(b.h_max() == 4.0);
}

TEST_CASE("cache stores exact keys and signed zero once") {
  Cache c;
  Point a{{0.0, 1.0}};
  Point b{{-0.0, 1.0}};
  CHECK(c.insert(a, Evaluation::ok(1.0)));
  CHECK(c.contains(b));
  CHECK_FALSE(c.insert(b, Evaluation::ok(2.0)));
  CHECK(c.lookup(a)->f == 1.0);
  Point near{{0.0, std::nextafter(1.0, 2.0)}};
  CHECK_FALSE(c.contains(near));
  CHECK(c.size() == 1);
}

TEST_CASE("cache claims prevent double evaluation") {
  Cache c;
  Point x{{1.0}};
  CHECK(c.try_claim(x));
  CHECK_FALSE(c.try_claim(x));
  c.release(x);
  CHECK(c.try_claim(x));
  c.insert(x, Evaluation::ok(0.0));
  CHECK_FALSE(c.try_claim(x));
}

TEST_CASE("concurrent inserts are linearizable") {
  Cache c;
  std::atomic<int> winners{0};
  std::vector<std::jthread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&] {
      for (int i = 0; i < 10000; ++i) {
        Point x{{static_cast<double>(i)}};
        if (c.try_claim(x)) {
          c.insert(x, Evaluation::ok(i));
          winners.fetch_add(1);
        }
      }
    });
  threads.clear();
  CHECK(winners.load() == 10000);
  CHECK(c.size() == 10000);
  auto entries = c.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) CHECK(entries[i].index == static_cast<std::int64_t>(i));
}
