#include "mads/barrier.hpp"

#include <algorithm>
#include <cmath>

namespace mads {

const char* to_string(SuccessKind kind) {
  switch (kind) {
    case SuccessKind::Failure: return "FAILURE";
    case SuccessKind::Partial: return "PARTIAL_SUCCESS";
    case SuccessKind::Full: return "FULL_SUCCESS";
  }
  return "?";
}

double extreme_barrier(const Evaluation& e) {
  if (!e.is_ok()) return kInf;
  for (double c : e.c)
    if (!(c <= 0.0)) return kInf;
  return e.f;
}

double h_measure(const Evaluation& e, std::span<const OutputKind> constraint_kinds) {
  if (!e.is_ok()) return kInf;
  double h = 0.0;
  for (std::size_t j = 0; j < e.c.size(); ++j) {
    const double c = e.c[j];
    const bool extreme = j < constraint_kinds.size() && constraint_kinds[j] == OutputKind::Eb;
    if (std::isnan(c)) return kInf;
    if (c <= 0.0) continue;
    if (extreme) return kInf;
    h += c * c;
  }
  return h;
}

Barrier::Barrier(BarrierKind kind, std::vector<OutputKind> constraint_kinds)
    : kind_(kind), constraint_kinds_(std::move(constraint_kinds)) {}

double Barrier::h_of(const Evaluation& e) const {
  if (kind_ == BarrierKind::Extreme) return std::isfinite(extreme_barrier(e)) ? 0.0 : kInf;
  return h_measure(e, constraint_kinds_);
}

const Incumbent& Barrier::frame_incumbent() const {
  if (best_feasible_) return *best_feasible_;
  if (best_infeasible_) return *best_infeasible_;
  throw Error(ErrorCode::NoEvaluableStart, "barrier has no incumbent");
}

SuccessKind Barrier::classify(const Point& x, const Evaluation& e) {
  if (kind_ == BarrierKind::Extreme) {
    const double f_trial = extreme_barrier(e);
    const double f_inc = best_feasible_ ? best_feasible_->f() : kInf;
    if (f_trial < f_inc) {
      best_feasible_ = Incumbent{x, e, 0.0};
      return SuccessKind::Full;
    }
    return SuccessKind::Failure;
  }

  const double h = h_measure(e, constraint_kinds_);
  if (h == 0.0) {
    const double f_inc = best_feasible_ ? best_feasible_->f() : kInf;
    if (e.f < f_inc) {
      best_feasible_ = Incumbent{x, e, 0.0};
      return SuccessKind::Full;
    }
    return SuccessKind::Failure;
  }
  if (!std::isfinite(h)) return SuccessKind::Failure;

  infeasible_h_seen_.insert(h);
  if (h > h_max_) return SuccessKind::Failure;

  const double h_inc = best_infeasible_ ? best_infeasible_->h : kInf;
  const double f_inc = best_infeasible_ ? best_infeasible_->f() : kInf;
  if (!(h < h_inc)) return SuccessKind::Failure;

  const SuccessKind kind = e.f < f_inc ? SuccessKind::Full : SuccessKind::Partial;
  best_infeasible_ = Incumbent{x, e, h};
  update_hmax(kind, h_inc);
  return kind;
}

void Barrier::update_hmax(SuccessKind kind, double previous_h) {
  if (kind_ == BarrierKind::Extreme || !best_infeasible_) return;
  if (kind == SuccessKind::Full) {
    h_max_ = best_infeasible_->h;
  } else if (kind == SuccessKind::Partial) {
    // Largest recorded violation strictly below the previous incumbent's.
    auto it = infeasible_h_seen_.lower_bound(previous_h);
    if (it != infeasible_h_seen_.begin()) h_max_ = *std::prev(it);
    else h_max_ = best_infeasible_->h;
  }
}

}  // namespace mads
