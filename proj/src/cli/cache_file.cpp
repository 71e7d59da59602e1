#include "mads/cli/cache_file.hpp"

#include "mads/bench/profiles.hpp"
#include "mads/cli/process_evaluator.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mads::cli {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "cache line " + std::to_string(line) + ": " + msg);
}

double number(const std::string& t, int line) {
  if (t == "inf") return kInf;
  if (t == "-inf") return -kInf;
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) fail(line, "bad number " + t);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

Point to_point(const std::vector<std::string>& tokens, std::size_t from, int line) {
  Point x(static_cast<Eigen::Index>(tokens.size() - from));
  for (std::size_t i = from; i < tokens.size(); ++i)
    x[static_cast<Eigen::Index>(i - from)] = number(tokens[i], line);
  return x;
}

const char* kind_name(OutputKind k) {
  return k == OutputKind::Obj ? "OBJ" : k == OutputKind::Pb ? "PB" : "EB";
}

std::optional<StopReason> stop_from(const std::string& s) {
  for (auto r : {StopReason::OpportunisticSuccess, StopReason::BudgetExhausted,
                 StopReason::QueueEmpty, StopReason::UserInterrupt, StopReason::MeshTolerance})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

}  // namespace

std::string cache_text(const RestartSnapshot& snap) {
  using bench::format_double;
  std::ostringstream out;
  out << "# n " << snap.n << "\n# outputs";
  for (auto k : snap.output_kinds) out << ' ' << kind_name(k);
  out << "\n# k " << snap.k << "\n# frame " << format_double(snap.frame) << "\n";
  out << "# stop " << (snap.stop ? to_string(*snap.stop) : "NONE") << "\n";
  if (snap.last_success_direction) out << "# last_dir " << format_point(*snap.last_success_direction) << "\n";
  if (!snap.rng_state.empty()) out << "# rng " << snap.rng_state << "\n";
  if (!snap.queue_rng_state.empty()) out << "# queue_rng " << snap.queue_rng_state << "\n";
  out << "# queue_counter " << snap.queue_counter << "\n# eval_count " << snap.eval_count << "\n";
  for (const auto& e : snap.cache) {
    out << format_point(e.x) << " | " << format_double(e.eval.f);
    for (double c : e.eval.c) out << ' ' << format_double(c);
    out << " | " << (e.eval.is_ok() ? "OK" : "FAILED") << "\n";
  }
  return out.str();
}

RestartSnapshot parse_cache_text(const std::string& text) {
  RestartSnapshot snap;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  std::int64_t index = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto t = split(line.substr(1));
      if (t.empty()) continue;
      const std::string& key = t[0];
      const std::string rest = line.substr(line.find(key) + key.size());
      if (key == "n") snap.n = std::stoi(t.at(1));
      else if (key == "outputs") {
        for (std::size_t i = 1; i < t.size(); ++i)
          snap.output_kinds.push_back(t[i] == "OBJ" ? OutputKind::Obj
                                      : t[i] == "PB" ? OutputKind::Pb
                                                     : OutputKind::Eb);
      } else if (key == "k") snap.k = std::stoll(t.at(1));
      else if (key == "frame") snap.frame = number(t.at(1), no);
      else if (key == "stop") snap.stop = stop_from(t.at(1));
      else if (key == "last_dir") snap.last_success_direction = to_point(t, 1, no);
      else if (key == "rng") snap.rng_state = rest.substr(rest.find_first_not_of(' '));
      else if (key == "queue_rng") snap.queue_rng_state = rest.substr(rest.find_first_not_of(' '));
      else if (key == "queue_counter") snap.queue_counter = std::stoll(t.at(1));
      else if (key == "eval_count") snap.eval_count = std::stoll(t.at(1));
      continue;
    }
    const auto p1 = line.find('|');
    const auto p2 = line.find('|', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) fail(no, "expected x | f c | status");
    const auto xs = split(line.substr(0, p1));
    const auto fc = split(line.substr(p1 + 1, p2 - p1 - 1));
    const auto st = split(line.substr(p2 + 1));
    if (xs.empty() || fc.empty() || st.size() != 1) fail(no, "expected x | f c | status");
    if (snap.n != 0 && static_cast<int>(xs.size()) != snap.n) fail(no, "wrong number of coordinates");
    CacheEntry e;
    e.x = to_point(xs, 0, no);
    e.eval.f = number(fc[0], no);
    for (std::size_t i = 1; i < fc.size(); ++i) e.eval.c.push_back(number(fc[i], no));
    if (st[0] == "OK") e.eval.status = EvalStatus::Ok;
    else if (st[0] == "FAILED") e.eval.status = EvalStatus::Failed;
    else fail(no, "unknown status " + st[0]);
    e.index = index++;
    snap.cache.push_back(std::move(e));
  }
  return snap;
}

void write_cache_file(const std::string& path, const RestartSnapshot& snap) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
    out << cache_text(snap);
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename " + tmp + " to " + path);
}

RestartSnapshot read_cache_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cache_text(ss.str());
}

}  // namespace mads::cli
