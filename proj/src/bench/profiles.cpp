#include "mads/bench/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace mads::bench {

std::vector<HistoryRow> history_rows(const std::vector<EvalRecord>& records) {
  std::vector<const EvalRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->eval_index < b->eval_index; });
  std::vector<HistoryRow> rows;
  double best = kInf;
  for (const auto* r : sorted) {
    if (r->eval.is_ok() && r->h == 0.0) best = std::min(best, r->eval.f);
    rows.push_back({r->eval_index, r->eval.f, r->h, best, r->wall_time});
  }
  return rows;
}

std::optional<std::int64_t> convergence_eval_count(const RunRecord& r, double f_L, double f0,
                                                   double tau) {
  const double target = f_L + tau * (f0 - f_L);
  for (const auto& row : r.rows)
    if (row.best_f <= target) return row.eval_index;
  return std::nullopt;
}

DataProfile::DataProfile(double tau, std::vector<double> ratios)
    : tau_(tau), ratios_(std::move(ratios)) {
  std::sort(ratios_.begin(), ratios_.end());
}

double DataProfile::operator()(double kappa) const {
  if (ratios_.empty()) return 0.0;
  const auto solved = std::upper_bound(ratios_.begin(), ratios_.end(), kappa) - ratios_.begin();
  return static_cast<double>(solved) / static_cast<double>(ratios_.size());
}

std::vector<double> DataProfile::curve(const std::vector<double>& kappas) const {
  std::vector<double> out;
  out.reserve(kappas.size());
  for (double k : kappas) out.push_back((*this)(k));
  return out;
}

std::map<std::string, DataProfile> data_profile(
    const std::map<std::string, std::vector<RunRecord>>& by_solver, double tau,
    const std::map<std::string, double>& f_best) {
  std::map<std::string, double> f_L = f_best;
  for (const auto& [solver, records] : by_solver)
    for (const auto& r : records) {
      if (f_best.contains(r.problem)) continue;
      auto [it, fresh] = f_L.try_emplace(r.problem, kInf);
      it->second = std::min(it->second, r.final_best());
    }

  std::map<std::string, DataProfile> out;
  for (const auto& [solver, records] : by_solver) {
    std::vector<double> ratios;
    for (const auto& r : records) {
      auto count = convergence_eval_count(r, f_L.at(r.problem), r.f0(), tau);
      ratios.push_back(count ? static_cast<double>(*count) / (r.n + 1) : kInf);
    }
    out.emplace(solver, DataProfile(tau, std::move(ratios)));
  }
  return out;
}

std::vector<EnvelopeRow> convergence_envelope(const std::vector<RunRecord>& records,
                                              const std::vector<std::int64_t>& checkpoints) {
  std::vector<EnvelopeRow> out;
  for (auto cp : checkpoints) {
    EnvelopeRow row{cp, 0.0, kInf, -kInf};
    for (const auto& r : records) {
      double v = kInf;
      for (const auto& h : r.rows) {
        if (h.eval_index > cp) break;
        v = h.best_f;
      }
      row.mean += v;
      row.min = std::min(row.min, v);
      row.max = std::max(row.max, v);
    }
    row.mean /= static_cast<double>(std::max<std::size_t>(1, records.size()));
    if (records.empty()) row = {cp, kInf, kInf, kInf};
    out.push_back(row);
  }
  return out;
}

std::vector<std::int64_t> default_checkpoints(int n) {
  std::vector<std::int64_t> cps{1};
  for (std::int64_t c = 1000; c <= 100LL * n; c += 1000) cps.push_back(c);
  return cps;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  return out;
}

void close_csv(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

}  // namespace

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows) {
  auto out = open_csv(path);
  out << "eval_index,f,h,best_f\n";
  for (const auto& r : rows)
    out << r.eval_index << ',' << format_double(r.f) << ',' << format_double(r.h) << ','
        << format_double(r.best_f) << '\n';
  close_csv(out, path);
}

void write_profile_csv(const std::string& path, const std::map<std::string, DataProfile>& profiles,
                       const std::vector<double>& kappas) {
  auto out = open_csv(path);
  out << "solver,kappa,fraction\n";
  for (const auto& [solver, p] : profiles)
    for (double k : kappas) out << solver << ',' << format_double(k) << ',' << format_double(p(k)) << '\n';
  close_csv(out, path);
}

void write_envelope_csv(const std::string& path, const std::vector<EnvelopeRow>& rows) {
  auto out = open_csv(path);
  out << "checkpoint,mean,min,max\n";
  for (const auto& r : rows)
    out << r.checkpoint << ',' << format_double(r.mean) << ',' << format_double(r.min) << ','
        << format_double(r.max) << '\n';
  close_csv(out, path);
}

}  // namespace mads::bench
