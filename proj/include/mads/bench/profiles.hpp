#pragma once

#include "mads/eval_engine.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mads::bench {

struct HistoryRow {
  std::int64_t eval_index = 0;
  double f = kInf;
  double h = kInf;
  double best_f = kInf;  // best feasible f so far
  double wall_time = 0.0;
};

struct RunRecord {
  std::string problem;
  std::string solver;
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<HistoryRow> rows;

  /// First recorded objective value.
  double f0() const { return rows.empty() ? kInf : rows.front().f; }
  double final_best() const { return rows.empty() ? kInf : rows.back().best_f; }
};

/// Builds the rows from applied evaluations in eval_index order. best_f is
/// the running minimum over feasible (h = 0) evaluations.
std::vector<HistoryRow> history_rows(const std::vector<EvalRecord>& records);

/// Smallest eval_index whose best_f <= f_L + tau * (f0 - f_L).
std::optional<std::int64_t> convergence_eval_count(const RunRecord& r, double f_L, double f0,
                                                   double tau);

/// Fraction of instances solved within kappa groups of n_p + 1 evaluations.
class DataProfile {
 public:
  DataProfile(double tau, std::vector<double> ratios);

  double tau() const { return tau_; }
  double operator()(double kappa) const;
  std::vector<double> curve(const std::vector<double>& kappas) const;
  std::size_t instances() const { return ratios_.size(); }

 private:
  double tau_;
  std::vector<double> ratios_;  // sorted; +inf for unsolved instances
};

/// One profile per solver. Every (problem, seed) record is an instance;
/// f_L per problem is the best value over all solvers and seeds unless given.
std::map<std::string, DataProfile> data_profile(
    const std::map<std::string, std::vector<RunRecord>>& by_solver, double tau,
    const std::map<std::string, double>& f_best = {});

struct EnvelopeRow {
  std::int64_t checkpoint = 0;
  double mean = kInf;
  double min = kInf;
  double max = kInf;
};

/// best_f statistics across seeds at each checkpoint; a run shorter than a
/// checkpoint carries its last value forward.
std::vector<EnvelopeRow> convergence_envelope(const std::vector<RunRecord>& records,
                                              const std::vector<std::int64_t>& checkpoints);

/// 1, 1000, 2000, ..., 100 n.
std::vector<std::int64_t> default_checkpoints(int n);

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows);
void write_profile_csv(const std::string& path, const std::map<std::string, DataProfile>& profiles,
                       const std::vector<double>& kappas);
void write_envelope_csv(const std::string& path, const std::vector<EnvelopeRow>& rows);

/// Shortest decimal that parses back to the same double; inf as "inf".
std::string format_double(double v);

}  // namespace mads::bench
