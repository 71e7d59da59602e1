#pragma once

#include "mads/cli/param_file.hpp"
#include "mads/mads.hpp"

#include <atomic>
#include <string>

namespace mads::cli {

/// SIGUSR1 requests a hot restart, SIGINT and SIGTERM an interrupt.
void install_signal_handlers();
std::atomic<bool>& hot_restart_flag();
std::atomic<bool>& interrupt_flag();

enum class HotRestartOutcome { Applied, Unchanged, Rejected };

/// Copies the mutable keys (budget, epsilon, searches, ordering, opportunism)
/// of the re-read file into the running instance. Throws
/// ImmutableParamChanged when DIMENSION, BB_OUTPUT_TYPE or X0 differ.
HotRestartOutcome apply_hot_restart(Mads& mads, SolveConfig& current, const SolveConfig& reread);

/// Re-reads param_path and applies it. Errors are reported on stderr and
/// leave the run unchanged.
HotRestartOutcome hot_restart(Mads& mads, SolveConfig& current, const std::string& param_path);

}  // namespace mads::cli
