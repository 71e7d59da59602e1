#include "mads/cli/outputs.hpp"

#include "mads/bench/profiles.hpp"
#include "mads/cli/process_evaluator.hpp"

#include <filesystem>

namespace mads::cli {

HistoryWriter::HistoryWriter(const std::string& path) : path_(path) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  out_.open(path, std::ios::app);
  if (!out_) throw Error(ErrorCode::IoError, "cannot write " + path);
  if (fresh) out_ << "eval_index,f,h,best_f\n";
}

void HistoryWriter::operator()(const EvalRecord& r) {
  if (r.eval.is_ok() && r.h == 0.0) best_ = std::min(best_, r.eval.f);
  out_ << r.eval_index << ',' << bench::format_double(r.eval.f) << ',' << bench::format_double(r.h)
       << ',' << bench::format_double(best_) << '\n';
}

void HistoryWriter::flush() {
  out_.flush();
  if (!out_) throw Error(ErrorCode::IoError, "cannot write " + path_);
}

std::string solution_line(const std::optional<Incumbent>& feasible,
                          const std::optional<Incumbent>& infeasible) {
  const auto& inc = feasible ? feasible : infeasible;
  if (!inc) return "no solution";
  return format_point(inc->x) + " | " + bench::format_double(inc->eval.f) + " | " +
         bench::format_double(inc->h);
}

}  // namespace mads::cli
