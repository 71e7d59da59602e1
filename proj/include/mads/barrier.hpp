#pragma once

#include "mads/core.hpp"

#include <optional>
#include <set>
#include <span>

namespace mads {

enum class SuccessKind { Failure = 0, Partial = 1, Full = 2 };

const char* to_string(SuccessKind kind);

/// f if the evaluation succeeded and every constraint is <= 0, +inf otherwise.
double extreme_barrier(const Evaluation& e);

/// Aggregated violation: sum of squared positive parts of the PB constraints,
/// +inf when the evaluation failed or any EB constraint is violated.
double h_measure(const Evaluation& e, std::span<const OutputKind> constraint_kinds);

struct Incumbent {
  Point x;
  Evaluation eval;
  double h = 0.0;

  double f() const { return eval.f; }
};

/// Feasible and least-infeasible incumbents plus the violation threshold.
///
/// Mutated only by the algorithm control context.
class Barrier {
 public:
  Barrier() = default;
  Barrier(BarrierKind kind, std::vector<OutputKind> constraint_kinds);

  /// Classifies a freshly evaluated trial point against the current
  /// incumbents and updates them (and h_max) in place.
  SuccessKind classify(const Point& x, const Evaluation& e);

  /// Threshold update after a success. `previous_h` is the h of the
  /// infeasible incumbent before the update.
  void update_hmax(SuccessKind kind, double previous_h);

  BarrierKind kind() const { return kind_; }
  const std::optional<Incumbent>& best_feasible() const { return best_feasible_; }
  const std::optional<Incumbent>& best_infeasible() const { return best_infeasible_; }
  double h_max() const { return h_max_; }
  double h_of(const Evaluation& e) const;

  bool has_incumbent() const { return best_feasible_ || best_infeasible_; }
  /// Poll center: feasible incumbent when it exists, else the infeasible one.
  const Incumbent& frame_incumbent() const;

 private:
  BarrierKind kind_ = BarrierKind::Extreme;
  std::vector<OutputKind> constraint_kinds_;
  std::optional<Incumbent> best_feasible_;
  std::optional<Incumbent> best_infeasible_;
  double h_max_ = kInf;
  std::set<double> infeasible_h_seen_;
};

}  // namespace mads
