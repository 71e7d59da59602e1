#pragma once

#include "mads/core.hpp"

#include <string>
#include <vector>

namespace mads::cli {

/// Runs `bb_path <input-file>` per call. The input file holds one line of
/// coordinates per point; standard output holds one line of outputs per
/// point, in BB_OUTPUT_TYPE order. inf and nan read as +inf. A nonzero exit
/// status, a signal or short output gives FAILED.
class ProcessEvaluator {
 public:
  /// Throws SpawnFailure when bb_path is not an executable file.
  ProcessEvaluator(std::string bb_path, std::vector<OutputKind> output_kinds);

  Evaluation operator()(const Point& x) const;
  std::vector<Evaluation> operator()(const std::vector<Point>& xs) const;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<OutputKind> kinds_;
};

/// Parses one line of blackbox output into an evaluation.
Evaluation parse_outputs(const std::string& line, const std::vector<OutputKind>& kinds);

/// Space separated shortest round-trip decimals.
std::string format_point(const Point& x);

}  // namespace mads::cli
