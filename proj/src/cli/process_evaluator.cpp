#include "mads/cli/process_evaluator.hpp"

#include "mads/bench/profiles.hpp"

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace mads::cli {

namespace {

std::atomic<std::uint64_t> g_file_counter{0};

std::string temp_input_path() {
  const auto dir = std::filesystem::temp_directory_path();
  const auto id = g_file_counter.fetch_add(1);
  return (dir / ("mads_bb_" + std::to_string(::getpid()) + "_" + std::to_string(id) + ".txt"))
      .string();
}

double read_token(const std::string& t, bool& ok) {
  std::string low;
  for (char c : t) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "inf" || low == "+inf" || low == "nan" || low == "-nan" || low == "infinity")
    return kInf;
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  auto [p, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) ok = false;
  if (std::isnan(v)) v = kInf;
  return v;
}

struct RunOutput {
  int status = -1;
  std::string out;
};

RunOutput run_process(const std::string& exe, const std::string& input) {
  int fds[2];
  if (::pipe(fds) != 0) return {};
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, fds[0]);
  posix_spawn_file_actions_addclose(&actions, fds[1]);
  std::string a0 = exe, a1 = input;
  char* argv[] = {a0.data(), a1.data(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(fds[1]);
  RunOutput r;
  if (rc != 0) {
    ::close(fds[0]);
    return r;
  }
  char buf[4096];
  ssize_t k;
  while ((k = ::read(fds[0], buf, sizeof buf)) > 0 || (k < 0 && errno == EINTR))
    if (k > 0) r.out.append(buf, static_cast<std::size_t>(k));
  ::close(fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

std::string format_point(const Point& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ' ';
    s += bench::format_double(x[i]);
  }
  return s;
}

Evaluation parse_outputs(const std::string& line, const std::vector<OutputKind>& kinds) {
  std::istringstream in(line);
  const std::size_t m = kinds.size() - 1;
  Evaluation e = Evaluation::ok(kInf, {});
  bool ok = true;
  for (auto kind : kinds) {
    std::string t;
    if (!(in >> t)) return Evaluation::failed(m);
    const double v = read_token(t, ok);
    if (kind == OutputKind::Obj) e.f = v;
    else e.c.push_back(v);
  }
  if (!ok) return Evaluation::failed(m);
  return e;
}

ProcessEvaluator::ProcessEvaluator(std::string bb_path, std::vector<OutputKind> output_kinds)
    : path_(std::move(bb_path)), kinds_(std::move(output_kinds)) {
  if (::access(path_.c_str(), X_OK) != 0 || std::filesystem::is_directory(path_))
    throw Error(ErrorCode::SpawnFailure, "blackbox is not executable: " + path_);
}

Evaluation ProcessEvaluator::operator()(const Point& x) const { return (*this)(std::vector<Point>{x})[0]; }

std::vector<Evaluation> ProcessEvaluator::operator()(const std::vector<Point>& xs) const {
  const std::size_t m = kinds_.size() - 1;
  const std::string input = temp_input_path();
  {
    std::ofstream f(input);
    for (const auto& x : xs) f << format_point(x) << '\n';
    if (!f) return std::vector<Evaluation>(xs.size(), Evaluation::failed(m));
  }
  const RunOutput r = run_process(path_, input);
  std::error_code ec;
  std::filesystem::remove(input, ec);

  std::vector<Evaluation> out(xs.size(), Evaluation::failed(m));
  if (r.status != 0) return out;
  std::istringstream lines(r.out);
  std::string line;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs.size() == 1) {
      out[i] = parse_outputs(r.out, kinds_);
      break;
    }
    if (!std::getline(lines, line)) break;
    out[i] = parse_outputs(line, kinds_);
  }
  return out;
}

}  // namespace mads::cli
