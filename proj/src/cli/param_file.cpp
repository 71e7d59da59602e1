#include "mads/cli/param_file.hpp"

#include "mads/bench/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mads::cli {

namespace {

const std::vector<std::string> kKeys{
    "DIMENSION", "BB_EXE",      "BB_OUTPUT_TYPE", "X0",          "LOWER_BOUND",
    "UPPER_BOUND", "MAX_BB_EVAL", "SEED",         "INITIAL_FRAME_SIZE", "EPSILON",
    "OPPORTUNISM", "ORDERING",   "SEARCHES",       "NB_THREADS",  "GROUP_MAX_SIZE",
    "MEGA_SEARCH_POLL", "PSD",   "CACHE_FILE",     "HISTORY_FILE"};

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : line) {
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (ch == '(' || ch == ')') {
      flush();
      out.emplace_back(1, ch);
    } else {
      cur += ch;
    }
  }
  flush();
  return out;
}

double to_double(const std::string& s, int line) {
  const std::string u = upper(s);
  if (u == "INF" || u == "+INF") return kInf;
  if (u == "-INF") return -kInf;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) parse_fail(line, "not a number: " + s);
  return v;
}

template <typename Int>
Int to_int(const std::string& s, int line) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) parse_fail(line, "not an integer: " + s);
  return v;
}

bool to_bool(const std::string& s, int line) {
  const std::string u = upper(s);
  if (u == "YES" || u == "TRUE" || u == "1" || u == "ON") return true;
  if (u == "NO" || u == "FALSE" || u == "0" || u == "OFF") return false;
  parse_fail(line, "not a boolean: " + s);
}

const ParamEntry& single(const ParamEntry& e) {
  if (e.values.size() != 1) parse_fail(e.line, e.key + " takes one value");
  return e;
}

// `( v1 ... vn )`, or `* v` to broadcast.
Point vector_value(const ParamEntry& e, int n) {
  const auto& v = e.values;
  if (v.size() == 2 && v[0] == "*") return Point::Constant(n, to_double(v[1], e.line));
  if (v.size() < 2 || v.front() != "(" || v.back() != ")")
    parse_fail(e.line, e.key + " expects ( v1 ... vn ) or * v");
  if (static_cast<int>(v.size()) - 2 != n)
    parse_fail(e.line, e.key + " has " + std::to_string(v.size() - 2) + " values, expected " +
                           std::to_string(n));
  Point x(n);
  for (int i = 0; i < n; ++i) x[i] = to_double(v[static_cast<std::size_t>(i) + 1], e.line);
  return x;
}

std::string vector_text(const Point& x) {
  std::string s = "(";
  for (double v : x) s += " " + bench::format_double(v);
  return s + " )";
}

const char* kind_name(OutputKind k) {
  switch (k) {
    case OutputKind::Obj: return "OBJ";
    case OutputKind::Pb: return "PB";
    case OutputKind::Eb: return "EB";
  }
  return "?";
}

}  // namespace

const ParamEntry* ParamFile::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

ParamFile parse_param_text(const std::string& text) {
  ParamFile file;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    ParamEntry e{upper(tokens[0]), {tokens.begin() + 1, tokens.end()}, no};
    if (std::find(kKeys.begin(), kKeys.end(), e.key) == kKeys.end())
      throw Error(ErrorCode::UnknownKey, "line " + std::to_string(no) + ": unknown key " + tokens[0]);
    if (file.find(e.key)) parse_fail(no, "duplicate key " + e.key);
    if (e.values.empty()) parse_fail(no, e.key + " has no value");
    file.entries.push_back(std::move(e));
  }
  return file;
}

ParamFile read_param_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_param_text(ss.str());
}

Problem SolveConfig::problem() const {
  Problem p;
  p.n = n;
  p.m = static_cast<int>(output_kinds.size()) - 1;
  p.output_kinds = output_kinds;
  p.lower = lower;
  p.upper = upper;
  p.x0 = {x0};
  p.name = bb_exe;
  return p;
}

SolveConfig build_config(const ParamFile& file) {
  for (const char* key : {"DIMENSION", "BB_EXE", "BB_OUTPUT_TYPE", "X0"})
    if (!file.find(key)) throw Error(ErrorCode::MissingKey, std::string("missing key ") + key);

  SolveConfig cfg;
  const auto& dim = single(*file.find("DIMENSION"));
  cfg.n = to_int<int>(dim.values[0], dim.line);
  if (cfg.n < 1) parse_fail(dim.line, "DIMENSION must be >= 1");
  cfg.bb_exe = single(*file.find("BB_EXE")).values[0];

  const auto& out = *file.find("BB_OUTPUT_TYPE");
  for (const auto& t : out.values) {
    const std::string u = upper(t);
    if (u == "OBJ") cfg.output_kinds.push_back(OutputKind::Obj);
    else if (u == "PB") cfg.output_kinds.push_back(OutputKind::Pb);
    else if (u == "EB") cfg.output_kinds.push_back(OutputKind::Eb);
    else parse_fail(out.line, "unknown output type " + t);
  }
  if (std::count(cfg.output_kinds.begin(), cfg.output_kinds.end(), OutputKind::Obj) != 1)
    parse_fail(out.line, "BB_OUTPUT_TYPE needs exactly one OBJ");

  cfg.x0 = vector_value(*file.find("X0"), cfg.n);
  cfg.lower = Point::Constant(cfg.n, -kInf);
  cfg.upper = Point::Constant(cfg.n, kInf);
  if (auto* e = file.find("LOWER_BOUND")) cfg.lower = vector_value(*e, cfg.n);
  if (auto* e = file.find("UPPER_BOUND")) cfg.upper = vector_value(*e, cfg.n);

  // Defaults depend on the bounds.
  Problem p = cfg.problem();
  p.evaluator = [](const Point&) { return Evaluation{}; };
  ValidatedProblem vp;
  try {
    vp = validate_problem(p);
  } catch (const Error& err) {
    parse_fail(file.find("X0")->line, err.what());
  }
  Params& params = cfg.params;
  params = default_params(vp);

  if (auto* e = file.find("MAX_BB_EVAL")) params.max_bb_eval = to_int<std::int64_t>(single(*e).values[0], e->line);
  if (auto* e = file.find("SEED")) params.seed = to_int<std::uint64_t>(single(*e).values[0], e->line);
  if (auto* e = file.find("INITIAL_FRAME_SIZE")) params.delta0 = to_double(single(*e).values[0], e->line);
  if (auto* e = file.find("EPSILON")) params.eps_stop = to_double(single(*e).values[0], e->line);
  if (auto* e = file.find("OPPORTUNISM")) params.opportunism = to_bool(single(*e).values[0], e->line);
  if (auto* e = file.find("ORDERING")) {
    auto o = ordering_from_string(upper(single(*e).values[0]));
    if (!o) parse_fail(e->line, "unknown ordering " + e->values[0]);
    params.ordering = *o;
  }
  if (auto* e = file.find("SEARCHES")) {
    params.searches_enabled.clear();
    if (!(e->values.size() == 1 && upper(e->values[0]) == "NONE"))
      for (const auto& t : e->values) {
        auto s = search_from_string(upper(t));
        if (!s) parse_fail(e->line, "unknown search " + t);
        params.searches_enabled.insert(*s);
      }
  }
  if (auto* e = file.find("NB_THREADS")) params.n_workers = to_int<int>(single(*e).values[0], e->line);
  if (auto* e = file.find("GROUP_MAX_SIZE")) params.group_max_size = to_int<int>(single(*e).values[0], e->line);
  if (auto* e = file.find("MEGA_SEARCH_POLL")) params.mega_search_poll = to_bool(single(*e).values[0], e->line);
  if (auto* e = file.find("PSD")) {
    const std::string mode = upper(e->values[0]);
    if (mode == "OFF" && e->values.size() == 1) {
      cfg.psd.on = false;
    } else if (mode == "ON" && e->values.size() == 3) {
      cfg.psd = {true, to_int<int>(e->values[1], e->line), to_int<int>(e->values[2], e->line)};
      if (cfg.psd.n_s < 1 || cfg.psd.n_s > cfg.n) parse_fail(e->line, "PSD n_s must lie in [1, n]");
      if (cfg.psd.n_mt < 2) parse_fail(e->line, "PSD n_mt must be >= 2");
    } else {
      parse_fail(e->line, "PSD expects ON n_s n_mt or OFF");
    }
  }
  if (auto* e = file.find("CACHE_FILE")) cfg.cache_file = single(*e).values[0];
  if (auto* e = file.find("HISTORY_FILE")) cfg.history_file = single(*e).values[0];

  try {
    check_params(params);
  } catch (const Error& err) {
    throw Error(ErrorCode::ParseError, err.what());
  }
  return cfg;
}

SolveConfig parse_params(const std::string& path) { return build_config(read_param_file(path)); }

std::string dump_params(const SolveConfig& cfg) {
  const Params& p = cfg.params;
  std::ostringstream out;
  out << "DIMENSION " << cfg.n << "\n";
  out << "BB_EXE " << cfg.bb_exe << "\n";
  out << "BB_OUTPUT_TYPE";
  for (auto k : cfg.output_kinds) out << ' ' << kind_name(k);
  out << "\n";
  out << "X0 " << vector_text(cfg.x0) << "\n";
  out << "LOWER_BOUND " << vector_text(cfg.lower) << "\n";
  out << "UPPER_BOUND " << vector_text(cfg.upper) << "\n";
  out << "MAX_BB_EVAL " << p.max_bb_eval << "\n";
  out << "SEED " << p.seed << "\n";
  out << "INITIAL_FRAME_SIZE " << bench::format_double(p.delta0) << "\n";
  out << "EPSILON " << bench::format_double(p.eps_stop) << "\n";
  out << "OPPORTUNISM " << (p.opportunism ? "YES" : "NO") << "\n";
  out << "ORDERING " << to_string(p.ordering) << "\n";
  out << "SEARCHES";
  if (p.searches_enabled.empty()) out << " NONE";
  for (auto s : p.searches_enabled) out << ' ' << to_string(s);
  out << "\n";
  out << "NB_THREADS " << p.n_workers << "\n";
  out << "GROUP_MAX_SIZE " << p.group_max_size << "\n";
  out << "MEGA_SEARCH_POLL " << (p.mega_search_poll ? "YES" : "NO") << "\n";
  if (cfg.psd.on) out << "PSD ON " << cfg.psd.n_s << ' ' << cfg.psd.n_mt << "\n";
  else out << "PSD OFF\n";
  if (!cfg.cache_file.empty()) out << "CACHE_FILE " << cfg.cache_file << "\n";
  if (!cfg.history_file.empty()) out << "HISTORY_FILE " << cfg.history_file << "\n";
  return out.str();
}

bool same_problem_and_params(const SolveConfig& a, const SolveConfig& b) {
  return a.n == b.n && a.bb_exe == b.bb_exe && a.output_kinds == b.output_kinds && a.x0 == b.x0 &&
         a.lower == b.lower && a.upper == b.upper && a.params == b.params && a.psd == b.psd &&
         a.cache_file == b.cache_file && a.history_file == b.history_file;
}

bool immutable_changed(const SolveConfig& before, const SolveConfig& after) {
  return before.n != after.n || before.output_kinds != after.output_kinds ||
         before.x0.size() != after.x0.size() || before.x0 != after.x0;
}

}  // namespace mads::cli
