#pragma once

#include "mads/barrier.hpp"
#include "mads/eval_engine.hpp"

#include <fstream>
#include <mutex>
#include <optional>
#include <string>

namespace mads::cli {

/// Appends `eval_index,f,h,best_f` rows as the log applies evaluations. The
/// log calls observers under its own lock, so rows arrive in order.
class HistoryWriter {
 public:
  explicit HistoryWriter(const std::string& path);
  void operator()(const EvalRecord& r);
  void flush();

 private:
  std::string path_;
  std::ofstream out_;
  double best_ = kInf;
};

/// `x* | f | h`, or `no solution` without any incumbent.
std::string solution_line(const std::optional<Incumbent>& feasible,
                          const std::optional<Incumbent>& infeasible);

}  // namespace mads::cli
