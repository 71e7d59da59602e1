#pragma once

#include "mads/core.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mads::bench {

struct BenchProblem {
  Problem problem;
  std::optional<double> f_best;  // known optimal value, when available
  bool constrained() const { return problem.m > 0; }
};

template <typename Derived>
typename Derived::Scalar rosenbrock(const Eigen::MatrixBase<Derived>& x) {
  const auto n = x.size();
  return (100.0 * (x.tail(n - 1).array() - x.head(n - 1).array().square()).square() +
          (1.0 - x.head(n - 1).array()).square())
      .sum();
}

template <typename Derived>
typename Derived::Scalar sphere(const Eigen::MatrixBase<Derived>& x) {
  return x.squaredNorm();
}

/// Bound-constrained Rosenbrock on [-10, 10]^n from (0.5, ..., 0.5).
BenchProblem make_srosenbr(int n);
/// Sphere on [-10, 10]^n; x0 = (3, ..., 3).
BenchProblem make_sphere(int n);
/// Variably dimensioned quartic; x0_i = 1 - i/n, optimum 0 at (1, ..., 1).
BenchProblem make_quartic(int n = 10);
BenchProblem make_crescent(int n = 10);
BenchProblem make_disk(int n = 10);
BenchProblem make_snake();
BenchProblem make_pentagon();
BenchProblem make_hs19();

/// Same values, each evaluation sleeps for delay first.
BenchProblem synthetic_slow_blackbox(BenchProblem base, std::chrono::nanoseconds delay);

/// Named problem factories. Builtins are registered on first use; external
/// suites add their own.
class ProblemRegistry {
 public:
  using Factory = std::function<BenchProblem()>;

  static ProblemRegistry& instance();

  void add(const std::string& name, Factory factory);
  bool contains(const std::string& name) const;
  BenchProblem make(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  ProblemRegistry();
  std::map<std::string, Factory> factories_;
};

}  // namespace mads::bench
