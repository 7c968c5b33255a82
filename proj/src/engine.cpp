#include "coinroute/engine.hpp"

#include <algorithm>
#include <cmath>

#include "coinroute/error.hpp"

namespace coinroute {

const char* to_string(MetricMode m) {
  return m == MetricMode::GlobalPerPacket ? "global-per-packet" : "sum-over-sources";
}

std::optional<MetricMode> parse_metric_mode(std::string_view text) {
  if (text == "global-per-packet" || text == "global") return MetricMode::GlobalPerPacket;
  if (text == "sum-over-sources" || text == "sum") return MetricMode::SumOverSources;
  return std::nullopt;
}

void SimConfig::validate() const {
  if (window_waves < 1) throw Error(ErrorKind::Config, "window_waves must be >= 1");
  if (warmup_waves < 0) throw Error(ErrorKind::Config, "warmup_waves must be >= 0");
  if (measure_waves < 1) throw Error(ErrorKind::Config, "measure_waves must be >= 1");
}

DecisionMap::DecisionMap(const CompiledNetwork& net) : hops_(net.slot_count(), -1) {
  for (int s : net.routable_slots()) hops_[s] = net.options(s).front();
}

WaveState::WaveState(const CompiledNetwork& net, int window_waves)
    : slots_(net.slot_count()),
      dests_(net.destination_count()),
      window_(window_waves),
      ring_(static_cast<std::size_t>(std::max(window_waves, 1))),
      sum_(slots_, 0.0),
      throughput_(slots_, 0.0),
      windowed_(slots_, 0.0),
      router_load_(net.node_count(), 0.0),
      decisions_(net) {
  if (window_waves < 1) throw Error(ErrorKind::Config, "window_waves must be >= 1");
}

void WaveState::push(std::vector<double> throughput, const DecisionMap& decisions) {
  if (static_cast<int>(throughput.size()) != slots_)
    throw Error(ErrorKind::State, "throughput vector has the wrong size");
  auto& cell = ring_[head_];
  if (filled_ == window_) {
    for (int s = 0; s < slots_; ++s) sum_[s] -= cell[s];
  }
  for (int s = 0; s < slots_; ++s) sum_[s] += throughput[s];
  cell = throughput;
  head_ = (head_ + 1) % window_;
  filled_ = std::min(filled_ + 1, window_);
  ++waves_;

  const double inv = 1.0 / filled_;
  std::fill(router_load_.begin(), router_load_.end(), 0.0);
  for (int s = 0; s < slots_; ++s) {
    windowed_[s] = sum_[s] * inv;
    router_load_[s / dests_] += windowed_[s];
  }
  throughput_ = std::move(throughput);
  decisions_ = decisions;
}

std::vector<double> WaveState::recompute_windowed() const {
  std::vector<double> x(slots_, 0.0);
  if (filled_ == 0) return x;
  for (int i = 0; i < filled_; ++i) {
    const auto& cell = ring_[(head_ - 1 - i + window_) % window_];
    for (int s = 0; s < slots_; ++s) x[s] += cell[s];
  }
  for (auto& v : x) v /= filled_;
  return x;
}

WaveMetrics run_wave(const CompiledNetwork& net, WaveState& state, const DecisionMap& decisions) {
  const int dests = net.destination_count();
  std::vector<double> x(net.slot_count(), 0.0);
  for (const auto& f : net.flows()) x[net.slot(f.source, f.dest)] += f.packets;

  for (int u : net.topological_order()) {
    for (int d = 0; d < dests; ++d) {
      const int s = net.slot(u, d);
      const double q = x[s];
      if (q == 0.0 || u == net.destination_node(d)) continue;
      const int next = decisions.next_hop(s);
      const auto& opts = net.options(s);
      if (next < 0 || std::find(opts.begin(), opts.end(), next) == opts.end()) {
        throw Error(ErrorKind::Routing, "no legal decision at node '" + net.name(u) +
                                            "' toward '" + net.name(net.destination_node(d)) + "'");
      }
      x[net.slot(next, d)] += q;
    }
  }

  state.push(std::move(x), decisions);

  std::vector<double> unit_cost(net.node_count());
  for (int r = 0; r < net.node_count(); ++r) unit_cost[r] = net.cost(r)(state.router_load(r));

  WaveMetrics m;
  m.wave = state.wave_index() - 1;
  const auto through = state.throughput();
  for (int r = 0; r < net.node_count(); ++r) {
    if (unit_cost[r] == 0.0) continue;
    double n = 0.0;
    for (int d = 0; d < dests; ++d) n += through[net.slot(r, d)];
    m.world_reward += n * unit_cost[r];
  }
  for (const auto& f : net.flows()) {
    double c = 0.0;
    const int target = net.destination_node(f.dest);
    for (int u = f.source;;) {
      c += unit_cost[u];
      if (u == target) break;
      u = decisions.next_hop(net.slot(u, f.dest));
      if (u < 0) throw Error(ErrorKind::Routing, "route of a flow ends before its destination");
    }
    m.per_source_cost.push_back(c);
    m.packets += f.packets;
  }
  return m;
}

ExperimentCell aggregate_metrics(const CompiledNetwork& net, std::span<const WaveMetrics> waves,
                                 MetricMode mode) {
  if (waves.empty()) throw Error(ErrorKind::State, "cannot aggregate an empty measurement window");
  std::vector<double> per_wave;
  per_wave.reserve(waves.size());
  double total_cost = 0.0, total_packets = 0.0;
  for (const auto& w : waves) {
    total_cost += w.world_reward;
    total_packets += w.packets;
    if (mode == MetricMode::GlobalPerPacket) {
      per_wave.push_back(w.packets > 0 ? w.world_reward / w.packets : 0.0);
    } else {
      double sum = 0.0;
      for (std::size_t i = 0; i < w.per_source_cost.size(); ++i)
        if (net.flows()[i].packets > 0) sum += w.per_source_cost[i];
      per_wave.push_back(sum);
    }
  }
  ExperimentCell cell;
  cell.waves = waves.size();
  if (mode == MetricMode::GlobalPerPacket) {
    cell.mean = total_packets > 0 ? total_cost / total_packets : 0.0;
  } else {
    double s = 0.0;
    for (double v : per_wave) s += v;
    cell.mean = s / per_wave.size();
  }
  double mu = 0.0;
  for (double v : per_wave) mu += v;
  mu /= per_wave.size();
  double var = 0.0;
  for (double v : per_wave) var += (v - mu) * (v - mu);
  cell.spread = std::sqrt(var / per_wave.size());
  return cell;
}

TraceWriter::TraceWriter(std::ostream& out) : out_(out) {
  out_ << "wave,router,dest,throughput,windowed_load,router_cost\n";
}

void TraceWriter::write(const CompiledNetwork& net, const WaveState& state) {
  const auto x = state.throughput();
  const auto big_x = state.windowed_load();
  for (int r = 0; r < net.node_count(); ++r) {
    const auto kind = net.kind(r);
    if (kind != NodeKind::Router && kind != NodeKind::Dummy) continue;
    const double cost = net.cost(r)(state.router_load(r));
    for (int d = 0; d < net.destination_count(); ++d) {
      const int s = net.slot(r, d);
      out_ << state.wave_index() - 1 << ',' << net.name(r) << ',' << net.name(net.destination_node(d))
           << ',' << x[s] << ',' << big_x[s] << ',' << cost << '\n';
    }
  }
}

}  // namespace coinroute
