#include "coinroute/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coinroute/error.hpp"
#include "coinroute/wlr.hpp"

namespace coinroute {

const char* to_string(Policy p) {
  switch (p) {
    case Policy::ISPA: return "ISPA";
    case Policy::FK: return "FK";
    case Policy::MB: return "MB";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "ISPA" || text == "ispa") return Policy::ISPA;
  if (text == "FK" || text == "fk" || text == "FK_COIN") return Policy::FK;
  if (text == "MB" || text == "mb" || text == "MB_COIN") return Policy::MB;
  return std::nullopt;
}

void PolicyConfig::validate() const {
  if (!(steering >= 0.0 && steering <= 1.0))
    throw Error(ErrorKind::Config, "steering must lie in [0,1]");
  if (bootstrap_waves < 0) throw Error(ErrorKind::Config, "bootstrap_waves must be >= 0");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RunRngs::RunRngs(std::uint64_t seed)
    : tie(splitmix64(seed)), steer(splitmix64(seed ^ 0x5deece66dULL) + 1) {}

void TrainingStore::append(int slot, TrainingExample example) {
  by_slot_[slot].push_back(std::move(example));
  ++total_;
}

std::span<const TrainingExample> TrainingStore::examples(int slot) const {
  auto it = by_slot_.find(slot);
  if (it == by_slot_.end()) return {};
  return it->second;
}

std::size_t TrainingStore::size(int slot) const { return examples(slot).size(); }

void TrainingStore::clear() {
  by_slot_.clear();
  total_ = 0;
}

std::size_t pick_lowest(std::span<const double> scores, Rng& rng) {
  if (scores.empty()) throw Error(ErrorKind::Routing, "no options to choose from");
  const double best = *std::min_element(scores.begin(), scores.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] <= best + tol) tied.push_back(i);
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

std::vector<double> ispa_cost_to_go(const CompiledNetwork& net, const WaveState& state) {
  std::vector<double> to_go(net.slot_count(), 0.0);
  const auto& order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (int d = 0; d < net.destination_count(); ++d) {
      const int s = net.slot(*it, d);
      const auto& opts = net.options(s);
      if (opts.empty()) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int v : opts)
        best = std::min(best, net.cost(v)(state.router_load(v)) + to_go[net.slot(v, d)]);
      to_go[s] = best;
    }
  }
  return to_go;
}

std::vector<double> ispa_scores(const CompiledNetwork& net, const WaveState& state,
                                std::span<const double> cost_to_go, int slot) {
  const int d = net.slot_dest(slot);
  std::vector<double> out;
  for (int v : net.options(slot))
    out.push_back(net.cost(v)(state.router_load(v)) + cost_to_go[net.slot(v, d)]);
  return out;
}

namespace {

void require_slot(const CompiledNetwork& net, int slot) {
  if (slot < 0 || slot >= net.slot_count() || net.options(slot).empty())
    throw Error(ErrorKind::Routing, "slot has no route to its destination");
}

Decision choose(const CompiledNetwork& net, int slot, std::span<const double> scores, Rng& rng) {
  const auto i = pick_lowest(scores, rng);
  return {net.options(slot)[i], scores[i]};
}

}  // namespace

Decision ispa_decide(const CompiledNetwork& net, const WaveState& state, int slot, Rng& rng) {
  require_slot(net, slot);
  const auto to_go = ispa_cost_to_go(net, state);
  return choose(net, slot, ispa_scores(net, state, to_go, slot), rng);
}

std::vector<double> fk_scores(const CompiledNetwork& net, const WaveState& state, int slot,
                              double inflow) {
  require_slot(net, slot);
  std::vector<double> out;
  for (int v : net.options(slot)) out.push_back(hypothetical_wlr(net, state, slot, v, inflow));
  return out;
}

Decision fk_decide(const CompiledNetwork& net, const WaveState& state, int slot, double inflow,
                   Rng& rng) {
  return choose(net, slot, fk_scores(net, state, slot, inflow), rng);
}

std::vector<double> mb_query(const CompiledNetwork& net, const WaveState& state, int slot,
                             int candidate, double inflow) {
  const auto h = hypothetical_snapshot(net, state, slot, candidate, inflow);
  std::vector<double> q;
  for (int v : net.options(slot)) {
    double z = 0.0;
    for (int d = 0; d < net.destination_count(); ++d) z += h.windowed[net.slot(v, d)];
    q.push_back(z);
  }
  return q;
}

double nearest_neighbor(std::span<const TrainingExample> examples, std::span<const double> query) {
  if (examples.empty()) throw Error(ErrorKind::Routing, "training store has no examples for this node");
  double best = std::numeric_limits<double>::infinity();
  const TrainingExample* hit = nullptr;
  for (const auto& e : examples) {
    if (e.input.size() != query.size())
      throw Error(ErrorKind::State, "training example has the wrong input width");
    double d2 = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) d2 += (e.input[i] - query[i]) * (e.input[i] - query[i]);
    if (d2 < best) {
      best = d2;
      hit = &e;
    }
  }
  return hit->output;
}

std::vector<double> mb_scores(const CompiledNetwork& net, const WaveState& state,
                              const TrainingStore& store, int slot, double inflow) {
  require_slot(net, slot);
  const auto ex = store.examples(slot);
  if (ex.empty())
    throw Error(ErrorKind::Routing, "training store is empty for node '" +
                                      net.name(net.slot_node(slot)) + "'; run the bootstrap first");
  std::vector<double> out;
  for (int v : net.options(slot)) out.push_back(nearest_neighbor(ex, mb_query(net, state, slot, v, inflow)));
  return out;
}

namespace {

bool steer_to_fk(double steering, Rng& rng) {
  if (steering >= 1.0) return true;
  if (steering <= 0.0) return false;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < steering;
}

}  // namespace

Decision mb_decide(const CompiledNetwork& net, const WaveState& state, const TrainingStore& store,
                   int slot, double inflow, double steering, RunRngs& rngs, bool* delegated) {
  const bool fk = steer_to_fk(steering, rngs.steer);
  if (delegated) *delegated = fk;
  if (fk) return fk_decide(net, state, slot, inflow, rngs.tie);
  return choose(net, slot, mb_scores(net, state, store, slot, inflow), rngs.tie);
}

namespace {

enum class Phase { Bootstrap, Warmup, Measure };

class Runner {
 public:
  Runner(const CompiledNetwork& net, const SimConfig& sim, const PolicyConfig& policy,
         const RunHooks& hooks)
      : net_(net), sim_(sim), policy_(policy), hooks_(hooks), state_(net, sim.window_waves), rngs_(sim.seed) {}

  void run(int waves, Phase phase) {
    for (int i = 0; i < waves; ++i) step(phase);
  }

  const TrainingStore& store() const { return store_; }
  TrainingStore take_store() { return std::move(store_); }
  const std::vector<WaveMetrics>& measured() const { return measured_; }
  int waves() const { return state_.wave_index(); }

 private:
  void step(Phase phase) {
    const bool boot = phase == Phase::Bootstrap;
    const bool record = boot || policy_.policy == Policy::MB;
    const bool need_ispa = boot || policy_.policy == Policy::ISPA;
    std::vector<double> to_go;
    if (need_ispa) to_go = ispa_cost_to_go(net_, state_);

    DecisionMap dec = state_.last_decisions();
    std::vector<double> planned(net_.slot_count(), 0.0);
    for (const auto& f : net_.flows()) planned[net_.slot(f.source, f.dest)] += f.packets;
    std::vector<std::pair<int, std::vector<double>>> pending;

    for (int s : net_.routable_slots()) {
      const double inflow = planned[s];
      int next = net_.options(s).front();
      if (net_.is_branching(s)) {
        std::vector<double> scores;
        Policy by = policy_.policy;
        if (need_ispa) {
          by = Policy::ISPA;
          scores = ispa_scores(net_, state_, to_go, s);
        } else if (policy_.policy == Policy::FK ||
                   steer_to_fk(policy_.steering, rngs_.steer)) {
          by = Policy::FK;
          scores = fk_scores(net_, state_, s, inflow);
        } else {
          scores = mb_scores(net_, state_, store_, s, inflow);
        }
        const auto pick = pick_lowest(scores, rngs_.tie);
        next = net_.options(s)[pick];
        if (hooks_.on_decision) {
          DecisionEvent e;
          e.wave = state_.wave_index();
          e.slot = s;
          e.decided_by = by;
          e.bootstrap = boot;
          e.inflow = inflow;
          e.candidates = net_.options(s);
          e.scores = scores;
          e.decision = {next, scores[pick]};
          e.state = &state_;
          hooks_.on_decision(e);
        }
        if (record) pending.emplace_back(s, mb_query(net_, state_, s, next, inflow));
      }
      dec.set(s, next);
      if (inflow != 0.0) planned[net_.slot(next, net_.slot_dest(s))] += inflow;
    }

    auto m = run_wave(net_, state_, dec);

    if (!pending.empty()) {
      const auto snap = snapshot_of(net_, state_);
      std::vector<std::optional<double>> realized(net_.destination_count());
      for (auto& [s, input] : pending) {
        auto& r = realized[net_.slot_dest(s)];
        if (!r) r = wave_wlr(snap, net_.slot_dest(s));
        store_.append(s, {std::move(input), *r});
      }
    }
    const bool measured = phase == Phase::Measure;
    if (hooks_.on_wave) hooks_.on_wave(state_, m, measured);
    if (measured) measured_.push_back(std::move(m));
  }

  const CompiledNetwork& net_;
  const SimConfig& sim_;
  const PolicyConfig& policy_;
  const RunHooks& hooks_;
  WaveState state_;
  RunRngs rngs_;
  TrainingStore store_;
  std::vector<WaveMetrics> measured_;
};

}  // namespace

RunResult run_policy(const CompiledNetwork& net, const SimConfig& sim, const PolicyConfig& policy,
                     const RunHooks& hooks) {
  sim.validate();
  policy.validate();
  Runner runner(net, sim, policy, hooks);
  RunResult out;
  if (policy.policy == Policy::MB && policy.steering < 1.0) {
    if (policy.bootstrap_waves < 1 && !net.branching_slots().empty())
      throw Error(ErrorKind::State, "MB COIN needs at least one bootstrap wave");
    runner.run(policy.bootstrap_waves, Phase::Bootstrap);
  }
  out.bootstrap_store_size = runner.store().size();
  runner.run(sim.warmup_waves, Phase::Warmup);
  runner.run(sim.measure_waves, Phase::Measure);
  out.cell = aggregate_metrics(net, runner.measured(), sim.metric_mode);
  out.store_size = runner.store().size();
  out.total_waves = runner.waves();
  return out;
}

TrainingStore bootstrap(const CompiledNetwork& net, const SimConfig& sim, int waves) {
  if (waves < 0) throw Error(ErrorKind::Config, "bootstrap wave count must be >= 0");
  PolicyConfig p;
  p.policy = Policy::MB;
  p.bootstrap_waves = waves;
  RunHooks none;
  Runner runner(net, sim, p, none);
  runner.run(waves, Phase::Bootstrap);
  return runner.take_store();
}

DecisionLogWriter::DecisionLogWriter(std::ostream& out, const CompiledNetwork& net)
    : out_(out), net_(net) {
  out_ << "wave,router,dest,policy,chosen,estimate\n";
}

void DecisionLogWriter::write(const DecisionEvent& e) {
  out_ << e.wave << ',' << net_.name(net_.slot_node(e.slot)) << ','
       << net_.name(net_.destination_node(net_.slot_dest(e.slot))) << ','
       << to_string(e.decided_by) << ',' << net_.name(e.decision.next_hop) << ','
       << e.decision.estimate << '\n';
}

}  // namespace coinroute
