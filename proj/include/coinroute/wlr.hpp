#pragma once

#include <vector>

#include "coinroute/engine.hpp"
#include "coinroute/network.hpp"

namespace coinroute {

/// Per-slot throughput x and windowed load X for one wave.
struct WaveSnapshot {
  const CompiledNetwork* net = nullptr;
  std::vector<double> throughput;
  std::vector<double> windowed;
};

WaveSnapshot snapshot_of(const CompiledNetwork& net, const WaveState& state);

/// sum_r (sum_d x_{r,d}) * V_r(sum_d X_{r,d})
double world_reward(const WaveSnapshot& s);

/// Copy of `s` with every x and X toward destination index `dest` set to 0.
/// Throws Error(Config) for an unknown destination.
WaveSnapshot clamp_destination(const WaveSnapshot& s, int dest);

/// Wonderful-life reward of the agents routing toward `dest`, from the
/// expanded per-router form. Equals world_reward(s) - world_reward(clamp).
double wave_wlr(const WaveSnapshot& s, int dest);

/// Predicted steady-state snapshot if the node of `slot` sends `inflow`
/// packets to `candidate` this wave while everything downstream keeps its
/// last-wave decisions. Both x and X of the result hold the predicted
/// windowed load X^h.
WaveSnapshot hypothetical_snapshot(const CompiledNetwork& net, const WaveState& state, int slot,
                                   int candidate, double inflow);

/// wave_wlr of hypothetical_snapshot for the slot's destination.
double hypothetical_wlr(const CompiledNetwork& net, const WaveState& state, int slot, int candidate,
                        double inflow);

}  // namespace coinroute
