#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mads {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A point of the variable space. Coordinates are always finite.
using Point = VectorX<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  DimensionMismatch,
  BoundViolation,
  NoObjective,
  NonFiniteCoordinate,
  InvalidParams,
  NonPositiveFrame,
  NoEvaluableStart,
  IncompatibleParams,
  MissingKey,
  UnknownKey,
  ParseError,
  ImmutableParamChanged,
  IoError,
  SpawnFailure,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class EvalStatus { Ok, Failed };

/// Blackbox output for one point: objective, constraints and a status flag.
struct Evaluation {
  double f = kInf;
  std::vector<double> c;
  EvalStatus status = EvalStatus::Failed;

  static Evaluation ok(double f, std::vector<double> c = {}) {
    return {f, std::move(c), EvalStatus::Ok};
  }
  /// A failed evaluation carries +inf for f and every constraint.
  static Evaluation failed(std::size_t m) {
    return {kInf, std::vector<double>(m, kInf), EvalStatus::Failed};
  }
  bool is_ok() const { return status == EvalStatus::Ok; }

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

enum class OutputKind { Obj, Pb, Eb };

using Evaluator = std::function<Evaluation(const Point&)>;

/// Evaluates a group of points in one blackbox call.
using BatchEvaluator = std::function<std::vector<Evaluation>(const std::vector<Point>&)>;

struct Problem {
  int n = 0;
  int m = 0;
  std::vector<OutputKind> output_kinds{OutputKind::Obj};
  std::optional<Point> lower;
  std::optional<Point> upper;
  std::vector<Point> x0;
  Evaluator evaluator;
  BatchEvaluator batch_evaluator;  // optional; used when points are grouped
  std::string name;
};

/// A problem whose invariants have been checked. Bounds are always present
/// (possibly infinite).
struct ValidatedProblem : Problem {
  const Point& lb() const { return *lower; }
  const Point& ub() const { return *upper; }
  /// Output kinds of the constraints only, in order.
  std::vector<OutputKind> constraint_kinds() const;
  bool has_finite_bounds() const;
  bool within_bounds(const Point& x) const;
};

ValidatedProblem validate_problem(const Problem& p);

enum class OrderingStrategy { LastSuccessDirection, GenerationOrder, Lexicographic, Random };

enum class SearchKind { Speculative, Lh, Nm, Quad };

enum class BarrierKind { Extreme, Progressive };

const char* to_string(OrderingStrategy s);
const char* to_string(SearchKind s);
std::optional<OrderingStrategy> ordering_from_string(const std::string& s);
std::optional<SearchKind> search_from_string(const std::string& s);

struct Params {
  double delta0 = 1.0;
  double tau = 0.5;
  double eps_stop = 1e-13;
  std::int64_t max_bb_eval = 1000;
  std::uint64_t seed = 0;
  bool opportunism = true;
  OrderingStrategy ordering = OrderingStrategy::LastSuccessDirection;
  std::set<SearchKind> searches_enabled{SearchKind::Speculative, SearchKind::Nm,
                                        SearchKind::Quad};
  int n_workers = 1;
  int group_max_size = 1;
  bool mega_search_poll = false;
  BarrierKind barrier_kind = BarrierKind::Progressive;

  // Per-search trial budgets.
  int speculative_count = 1;
  int nm_max_points = 4;
  int lh_count = 0;  // 0 means n
  std::int64_t quad_nested_budget = 80;

  // Frame-size bounds imposed by an enclosing algorithm (PSD master mesh).
  double frame_cap = kInf;
  double min_mesh_size = 0.0;

  friend bool operator==(const Params&, const Params&) = default;
};

void check_params(const Params& params);

Params default_params(const ValidatedProblem& p);

}  // namespace mads
