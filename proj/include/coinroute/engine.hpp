#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "coinroute/network.hpp"

namespace coinroute {

enum class MetricMode {
  GlobalPerPacket,  // total cost over total packets
  SumOverSources,   // per wave, sum over sources of that source's per-packet cost
};

const char* to_string(MetricMode m);
std::optional<MetricMode> parse_metric_mode(std::string_view text);

struct SimConfig {
  int window_waves = 100;
  int warmup_waves = 300;
  int measure_waves = 1000;
  std::uint64_t seed = 1;
  MetricMode metric_mode = MetricMode::GlobalPerPacket;

  /// Throws Error(Config) on a non-positive window or measurement length.
  void validate() const;
};

/// Chosen next hop for every (node, destination) slot that can route toward
/// its destination; -1 elsewhere.
class DecisionMap {
 public:
  DecisionMap() = default;
  /// Every routable slot starts on its first option.
  explicit DecisionMap(const CompiledNetwork& net);

  int next_hop(int slot) const { return slot < static_cast<int>(hops_.size()) ? hops_[slot] : -1; }
  void set(int slot, int next_hop) { hops_.at(slot) = next_hop; }
  std::span<const int> raw() const { return hops_; }

  friend bool operator==(const DecisionMap&, const DecisionMap&) = default;

 private:
  std::vector<int> hops_;
};

/// Traffic history of a running simulation. Holds the last wave's
/// per-slot throughput x, the ring buffer of the last W waves, the windowed
/// per-slot load X (mean over the filled part of the window, current wave
/// included) and the per-node load Z = sum_d X.
class WaveState {
 public:
  WaveState(const CompiledNetwork& net, int window_waves);

  int wave_index() const { return waves_; }  // number of completed waves
  int window_waves() const { return window_; }
  int filled() const { return filled_; }

  std::span<const double> throughput() const { return throughput_; }
  std::span<const double> windowed_load() const { return windowed_; }
  std::span<const double> router_loads() const { return router_load_; }
  double router_load(int node) const { return router_load_[node]; }
  const DecisionMap& last_decisions() const { return decisions_; }

  /// Appends one wave's throughput and recomputes X and Z incrementally.
  void push(std::vector<double> throughput, const DecisionMap& decisions);

  /// X recomputed from the ring buffer without the running sums.
  std::vector<double> recompute_windowed() const;

 private:
  int slots_;
  int dests_;
  int window_;
  int waves_ = 0;
  int filled_ = 0;
  int head_ = 0;
  std::vector<std::vector<double>> ring_;
  std::vector<double> sum_;
  std::vector<double> throughput_;
  std::vector<double> windowed_;
  std::vector<double> router_load_;
  DecisionMap decisions_;
};

struct WaveMetrics {
  int wave = 0;
  double world_reward = 0.0;            // sum_r n_r * V_r(Z_r)
  std::vector<double> per_source_cost;  // per flow: per-packet cost along its route
  double packets = 0.0;
};

/// Injects every flow, routes it along `decisions`, appends the wave to the
/// window and charges each router V_r(Z_r) per packet. Throws
/// Error(Routing) when traffic reaches a slot without a legal decision.
WaveMetrics run_wave(const CompiledNetwork& net, WaveState& state, const DecisionMap& decisions);

struct ExperimentCell {
  double mean = 0.0;
  double spread = 0.0;  // standard deviation of the per-wave metric
  std::size_t waves = 0;
};

/// Throws Error(State) for an empty window.
ExperimentCell aggregate_metrics(const CompiledNetwork& net, std::span<const WaveMetrics> waves,
                                 MetricMode mode);

/// CSV rows `wave,router,dest,throughput,windowed_load,router_cost`, one per
/// router/dummy node and destination.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out);
  void write(const CompiledNetwork& net, const WaveState& state);

 private:
  std::ostream& out_;
};

}  // namespace coinroute
