#include "mads/bench/problems.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace mads::bench {

namespace {

BenchProblem make(std::string name, int n, int m, Point x0, std::optional<Point> lb,
                  std::optional<Point> ub, Evaluator eval, std::optional<double> f_best) {
  BenchProblem b;
  b.problem.name = std::move(name);
  b.problem.n = n;
  b.problem.m = m;
  b.problem.output_kinds.assign(1, OutputKind::Obj);
  b.problem.output_kinds.insert(b.problem.output_kinds.end(), static_cast<std::size_t>(m),
                                OutputKind::Pb);
  b.problem.x0 = {std::move(x0)};
  b.problem.lower = std::move(lb);
  b.problem.upper = std::move(ub);
  b.problem.evaluator = std::move(eval);
  b.f_best = f_best;
  return b;
}

}  // namespace

BenchProblem make_srosenbr(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidParams, "rosenbrock needs n >= 2");
  return make("SRosenbr" + std::to_string(n), n, 0, Point::Constant(n, 0.5),
              Point::Constant(n, -10.0), Point::Constant(n, 10.0),
              [](const Point& x) { return Evaluation::ok(rosenbrock(x)); }, 0.0);
}

BenchProblem make_sphere(int n) {
  return make("Sphere" + std::to_string(n), n, 0, Point::Constant(n, 3.0),
              Point::Constant(n, -10.0), Point::Constant(n, 10.0),
              [](const Point& x) { return Evaluation::ok(sphere(x)); }, 0.0);
}

BenchProblem make_quartic(int n) {
  Point x0(n);
  for (int i = 0; i < n; ++i) x0[i] = 1.0 - static_cast<double>(i + 1) / n;
  auto f = [](const Point& x) {
    const Point r = x.array() - 1.0;
    const double s = (r.array() * Eigen::ArrayXd::LinSpaced(r.size(), 1.0, static_cast<double>(r.size()))).sum();
    return Evaluation::ok(r.squaredNorm() + s * s + s * s * s * s);
  };
  return make("Quartic" + std::to_string(n), n, 0, x0, std::nullopt, std::nullopt, f, 0.0);
}

// min x_n inside the ball of radius n around 1, outside the one around -1.
BenchProblem make_crescent(int n) {
  const double r2 = static_cast<double>(n) * n;
  auto f = [r2](const Point& x) {
    const double c1 = (x.array() - 1.0).square().sum() - r2;
    const double c2 = r2 - (x.array() + 1.0).square().sum();
    return Evaluation::ok(x[x.size() - 1], {c1, c2});
  };
  return make("CRESCENT" + std::to_string(n), n, 2, Point::Zero(n), std::nullopt, std::nullopt, f,
              std::nullopt);
}

BenchProblem make_disk(int n) {
  const double r2 = 3.0 * n;
  auto f = [r2](const Point& x) {
    return Evaluation::ok(x[x.size() - 1], {x.squaredNorm() - r2});
  };
  return make("DISK" + std::to_string(n), n, 1, Point::Constant(n, 3.0), std::nullopt,
              std::nullopt, f, -std::sqrt(r2));
}

// A thin band along sin(x1), walked towards (20, 1).
BenchProblem make_snake() {
  auto f = [](const Point& x) {
    const double obj = std::hypot(x[0] - 20.0, x[1] - 1.0);
    const double s = std::sin(x[0]);
    return Evaluation::ok(obj, {s - 0.1 - x[1], x[1] - s});
  };
  return make("SNAKE", 2, 2, Point{{0.0, -10.0}}, std::nullopt, std::nullopt, f, std::nullopt);
}

BenchProblem make_pentagon() {
  auto f = [](const Point& x) {
    const double obj = -std::hypot(x[0] - x[2], x[1] - x[3]) - std::hypot(x[2] - x[4], x[3] - x[5]) -
                       std::hypot(x[4] - x[0], x[5] - x[1]);
    std::vector<double> c;
    c.reserve(15);
    for (int i = 0; i < 6; i += 2)
      for (int j = 0; j < 5; ++j) {
        const double a = 2.0 * std::numbers::pi * j / 5.0;
        c.push_back(x[i] * std::cos(a) + x[i + 1] * std::sin(a) - 1.0);
      }
    return Evaluation::ok(obj, std::move(c));
  };
  return make("PENTAGON", 6, 15, Point{{-1.0, 0.0, 0.0, -1.0, 1.0, 1.0}}, std::nullopt,
              std::nullopt, f, std::nullopt);
}

BenchProblem make_hs19() {
  auto f = [](const Point& x) {
    const double obj = std::pow(x[0] - 10.0, 3) + std::pow(x[1] - 20.0, 3);
    const double c1 = 100.0 - std::pow(x[0] - 5.0, 2) - std::pow(x[1] - 5.0, 2);
    const double c2 = std::pow(x[0] - 6.0, 2) + std::pow(x[1] - 5.0, 2) - 82.81;
    return Evaluation::ok(obj, {c1, c2});
  };
  return make("HS19", 2, 2, Point{{20.1, 5.84}}, Point{{13.0, 0.0}}, Point{{100.0, 100.0}}, f,
              -6961.81381);
}

BenchProblem synthetic_slow_blackbox(BenchProblem base, std::chrono::nanoseconds delay) {
  if (delay.count() < 0) throw Error(ErrorCode::InvalidParams, "delay must be non-negative");
  auto inner = base.problem.evaluator;
  base.problem.evaluator = [inner, delay](const Point& x) {
    std::this_thread::sleep_for(delay);
    return inner(x);
  };
  return base;
}

ProblemRegistry& ProblemRegistry::instance() {
  static ProblemRegistry r;
  return r;
}

ProblemRegistry::ProblemRegistry() {
  add("SRosenbr2", [] { return make_srosenbr(2); });
  add("SRosenbr50", [] { return make_srosenbr(50); });
  add("SRosenbr250", [] { return make_srosenbr(250); });
  for (int n : {2, 5, 10}) add("Sphere" + std::to_string(n), [n] { return make_sphere(n); });
  add("Quartic10", [] { return make_quartic(10); });
  add("CRESCENT10", [] { return make_crescent(10); });
  add("DISK10", [] { return make_disk(10); });
  add("SNAKE", make_snake);
  add("PENTAGON", make_pentagon);
  add("HS19", make_hs19);
}

void ProblemRegistry::add(const std::string& name, Factory factory) {
  factories_[name] = std::move(factory);
}

bool ProblemRegistry::contains(const std::string& name) const { return factories_.contains(name); }

BenchProblem ProblemRegistry::make(const std::string& name) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw Error(ErrorCode::InvalidParams, "unknown problem: " + name);
  return it->second();
}

std::vector<std::string> ProblemRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : factories_) out.push_back(k);
  return out;
}

}  // namespace mads::bench
