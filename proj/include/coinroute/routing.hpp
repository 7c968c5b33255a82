#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "coinroute/engine.hpp"
#include "coinroute/network.hpp"

namespace coinroute {

enum class Policy { ISPA, FK, MB };

const char* to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view text);

struct PolicyConfig {
  Policy policy = Policy::ISPA;
  double steering = 0.5;     // MB only: probability of delegating a decision to FK
  int bootstrap_waves = 100;  // MB only: ISPA waves that seed the training store

  /// Throws Error(Config) for steering outside [0,1] or negative bootstrap.
  void validate() const;
};

using Rng = std::mt19937_64;

/// Per-run random streams derived from one seed.
struct RunRngs {
  Rng tie;
  Rng steer;
  explicit RunRngs(std::uint64_t seed);
};

std::uint64_t splitmix64(std::uint64_t x);

struct Decision {
  int next_hop = -1;
  double estimate = 0.0;  // score of the chosen option, lower is better
};

struct TrainingExample {
  std::vector<double> input;  // predicted Z of each option node, in option order
  double output = 0.0;        // realized wonderful-life reward
};

class TrainingStore {
 public:
  void append(int slot, TrainingExample example);
  std::span<const TrainingExample> examples(int slot) const;
  std::size_t size() const { return total_; }
  std::size_t size(int slot) const;
  void clear();

 private:
  std::map<int, std::vector<TrainingExample>> by_slot_;
  std::size_t total_ = 0;
};

/// Index of the lowest score; equal scores are broken uniformly with `rng`.
std::size_t pick_lowest(std::span<const double> scores, Rng& rng);

/// Cheapest remaining cost from each slot's node to its destination under
/// the frozen loads Z of `state` (the node itself excluded).
std::vector<double> ispa_cost_to_go(const CompiledNetwork& net, const WaveState& state);

/// Per-option cost V_v(Z_v) + cost_to_go(v).
std::vector<double> ispa_scores(const CompiledNetwork& net, const WaveState& state,
                                std::span<const double> cost_to_go, int slot);

Decision ispa_decide(const CompiledNetwork& net, const WaveState& state, int slot, Rng& rng);

/// Per-option hypothetical wonderful-life reward for `inflow` packets.
std::vector<double> fk_scores(const CompiledNetwork& net, const WaveState& state, int slot,
                              double inflow);

Decision fk_decide(const CompiledNetwork& net, const WaveState& state, int slot, double inflow,
                   Rng& rng);

/// Learner input for sending `inflow` packets to `candidate`.
std::vector<double> mb_query(const CompiledNetwork& net, const WaveState& state, int slot,
                             int candidate, double inflow);

/// Output of the nearest stored example (Euclidean); the first one wins an
/// exact tie. Throws Error(Routing) for an empty set.
double nearest_neighbor(std::span<const TrainingExample> examples, std::span<const double> query);

std::vector<double> mb_scores(const CompiledNetwork& net, const WaveState& state,
                              const TrainingStore& store, int slot, double inflow);

/// Learner decision, or an FK decision with probability `steering`.
/// `delegated` reports which of the two was used.
Decision mb_decide(const CompiledNetwork& net, const WaveState& state, const TrainingStore& store,
                   int slot, double inflow, double steering, RunRngs& rngs,
                   bool* delegated = nullptr);

struct DecisionEvent {
  int wave = 0;
  int slot = 0;
  Policy decided_by = Policy::ISPA;
  bool bootstrap = false;
  double inflow = 0.0;
  std::span<const int> candidates;
  std::span<const double> scores;
  Decision decision;
  const WaveState* state = nullptr;  // state before the wave
};

struct RunHooks {
  std::function<void(const DecisionEvent&)> on_decision;
  std::function<void(const WaveState&, const WaveMetrics&, bool measured)> on_wave;
};

struct RunResult {
  ExperimentCell cell;
  std::size_t store_size = 0;
  std::size_t bootstrap_store_size = 0;
  int total_waves = 0;
};

/// Wave loop for one policy: MB bootstrap (skipped when steering is 1),
/// warm-up, then measurement. Only branching slots consult the policy.
RunResult run_policy(const CompiledNetwork& net, const SimConfig& sim, const PolicyConfig& policy,
                     const RunHooks& hooks = {});

/// Runs `waves` ISPA waves from an empty history and records one example
/// per branching slot per wave.
TrainingStore bootstrap(const CompiledNetwork& net, const SimConfig& sim, int waves);

/// CSV rows `wave,router,dest,policy,chosen,estimate`.
class DecisionLogWriter {
 public:
  DecisionLogWriter(std::ostream& out, const CompiledNetwork& net);
  void write(const DecisionEvent& e);

 private:
  std::ostream& out_;
  const CompiledNetwork& net_;
};

}  // namespace coinroute
