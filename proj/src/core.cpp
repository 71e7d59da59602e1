#include "mads/core.hpp"

#include <algorithm>
#include <cmath>

namespace mads {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::NoObjective: return "NoObjective";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NonPositiveFrame: return "NonPositiveFrame";
    case ErrorCode::NoEvaluableStart: return "NoEvaluableStart";
    case ErrorCode::IncompatibleParams: return "IncompatibleParams";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ImmutableParamChanged: return "ImmutableParamChanged";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SpawnFailure: return "SpawnFailure";
  }
  return "Unknown";
}

std::vector<OutputKind> ValidatedProblem::constraint_kinds() const {
  std::vector<OutputKind> kinds;
  for (auto k : output_kinds)
    if (k != OutputKind::Obj) kinds.push_back(k);
  return kinds;
}

bool ValidatedProblem::has_finite_bounds() const {
  return lb().allFinite() && ub().allFinite();
}

bool ValidatedProblem::within_bounds(const Point& x) const {
  return (x.array() >= lb().array()).all() && (x.array() <= ub().array()).all();
}

ValidatedProblem validate_problem(const Problem& p) {
  if (p.n < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be >= 1");
  if (std::count(p.output_kinds.begin(), p.output_kinds.end(), OutputKind::Obj) != 1)
    throw Error(ErrorCode::NoObjective, "output kinds must contain exactly one OBJ");
  if (static_cast<int>(p.output_kinds.size()) != 1 + p.m)
    throw Error(ErrorCode::DimensionMismatch, "output kinds must have 1+m entries");

  ValidatedProblem v;
  static_cast<Problem&>(v) = p;
  if (!v.lower) v.lower = Point::Constant(p.n, -kInf);
  if (!v.upper) v.upper = Point::Constant(p.n, kInf);
  if (v.lower->size() != p.n || v.upper->size() != p.n)
    throw Error(ErrorCode::DimensionMismatch, "bounds length differs from dimension");
  if ((v.lower->array() > v.upper->array()).any())
    throw Error(ErrorCode::BoundViolation, "lower bound exceeds upper bound");

  if (p.x0.empty()) throw Error(ErrorCode::DimensionMismatch, "no starting point");
  for (const auto& x : p.x0) {
    if (x.size() != p.n)
      throw Error(ErrorCode::DimensionMismatch,
                  "x0 has " + std::to_string(x.size()) + " coordinates, expected " +
                      std::to_string(p.n));
    if (!x.allFinite()) throw Error(ErrorCode::NonFiniteCoordinate, "x0 is not finite");
    if (!v.within_bounds(x)) throw Error(ErrorCode::BoundViolation, "x0 outside bounds");
  }
  return v;
}

const char* to_string(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::LastSuccessDirection: return "LAST_SUCCESS_DIRECTION";
    case OrderingStrategy::GenerationOrder: return "GENERATION_ORDER";
    case OrderingStrategy::Lexicographic: return "LEXICOGRAPHIC";
    case OrderingStrategy::Random: return "RANDOM";
  }
  return "?";
}

const char* to_string(SearchKind s) {
  switch (s) {
    case SearchKind::Speculative: return "SPECULATIVE";
    case SearchKind::Lh: return "LH";
    case SearchKind::Nm: return "NM";
    case SearchKind::Quad: return "QUAD";
  }
  return "?";
}

std::optional<OrderingStrategy> ordering_from_string(const std::string& s) {
  for (auto o : {OrderingStrategy::LastSuccessDirection, OrderingStrategy::GenerationOrder,
                 OrderingStrategy::Lexicographic, OrderingStrategy::Random})
    if (s == to_string(o)) return o;
  return std::nullopt;
}

std::optional<SearchKind> search_from_string(const std::string& s) {
  for (auto k : {SearchKind::Speculative, SearchKind::Lh, SearchKind::Nm, SearchKind::Quad})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

void check_params(const Params& params) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidParams, msg); };
  if (!(params.delta0 > 0.0) || !std::isfinite(params.delta0)) fail("delta0 must be > 0");
  if (!(params.tau > 0.0 && params.tau < 1.0)) fail("tau must lie in (0,1)");
  if (!(params.eps_stop >= 0.0)) fail("eps_stop must be >= 0");
  if (params.max_bb_eval < 0) fail("max_bb_eval must be >= 0");
  if (params.n_workers < 1) fail("n_workers must be >= 1");
  if (params.group_max_size < 1) fail("group_max_size must be >= 1");
}

Params default_params(const ValidatedProblem& p) {
  Params params;
  double delta0 = kInf;
  for (int i = 0; i < p.n; ++i) {
    const double range = p.ub()[i] - p.lb()[i];
    if (std::isfinite(range) && range > 0.0) delta0 = std::min(delta0, 0.1 * range);
  }
  params.delta0 = std::isfinite(delta0) ? delta0 : 1.0;
  params.barrier_kind = BarrierKind::Progressive;
  return params;
}

}  // namespace mads
