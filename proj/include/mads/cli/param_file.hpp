#pragma once

#include "mads/core.hpp"

#include <string>
#include <vector>

namespace mads::cli {

struct ParamEntry {
  std::string key;
  std::vector<std::string> values;
  int line = 0;
};

/// Ordered key/value lines. `#` starts a comment; parentheses are tokens.
struct ParamFile {
  std::vector<ParamEntry> entries;
  const ParamEntry* find(const std::string& key) const;
};

ParamFile parse_param_text(const std::string& text);
ParamFile read_param_file(const std::string& path);

struct PsdSetting {
  bool on = false;
  int n_s = 2;
  int n_mt = 4;
  friend bool operator==(const PsdSetting&, const PsdSetting&) = default;
};

/// Everything a solve needs, as read from a parameter file. The evaluator is
/// not bound here; see bind_blackbox.
struct SolveConfig {
  int n = 0;
  std::string bb_exe;  // path, or builtin:<problem>
  std::vector<OutputKind> output_kinds;
  Point x0;
  Point lower;
  Point upper;
  Params params;
  PsdSetting psd;
  std::string cache_file;
  std::string history_file;

  /// Problem without an evaluator.
  Problem problem() const;
};

/// Maps the entries to a configuration. Errors: MissingKey, UnknownKey,
/// ParseError (message carries the line number).
SolveConfig build_config(const ParamFile& file);
SolveConfig parse_params(const std::string& path);

/// Canonical dump; parsing it back gives an equal configuration.
std::string dump_params(const SolveConfig& cfg);

bool same_problem_and_params(const SolveConfig& a, const SolveConfig& b);

/// Keys whose change forbids a hot restart.
bool immutable_changed(const SolveConfig& before, const SolveConfig& after);

}  // namespace mads::cli
