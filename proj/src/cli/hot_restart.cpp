#include "mads/cli/hot_restart.hpp"

#include <csignal>
#include <iostream>

namespace mads::cli {

namespace {

std::atomic<bool> g_hot{false};
std::atomic<bool> g_interrupt{false};

extern "C" void on_usr1(int) { g_hot.store(true); }
extern "C" void on_stop(int) { g_interrupt.store(true); }

}  // namespace

std::atomic<bool>& hot_restart_flag() { return g_hot; }
std::atomic<bool>& interrupt_flag() { return g_interrupt; }

void install_signal_handlers() {
  std::signal(SIGUSR1, on_usr1);
  std::signal(SIGINT, on_stop);
  std::signal(SIGTERM, on_stop);
}

HotRestartOutcome apply_hot_restart(Mads& mads, SolveConfig& current, const SolveConfig& reread) {
  if (immutable_changed(current, reread))
    throw Error(ErrorCode::ImmutableParamChanged, "DIMENSION, BB_OUTPUT_TYPE and X0 cannot change");
  Params next = mads.params();
  next.max_bb_eval = reread.params.max_bb_eval;
  next.eps_stop = reread.params.eps_stop;
  next.searches_enabled = reread.params.searches_enabled;
  next.ordering = reread.params.ordering;
  next.opportunism = reread.params.opportunism;
  if (next == mads.params()) return HotRestartOutcome::Unchanged;
  mads.set_params(next);
  current.params = next;
  return HotRestartOutcome::Applied;
}

HotRestartOutcome hot_restart(Mads& mads, SolveConfig& current, const std::string& param_path) {
  try {
    return apply_hot_restart(mads, current, parse_params(param_path));
  } catch (const Error& e) {
    std::cerr << "hot restart rejected: " << e.what() << "\n";
    return HotRestartOutcome::Rejected;
  }
}

}  // namespace mads::cli
