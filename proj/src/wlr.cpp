#include "coinroute/wlr.hpp"

#include <algorithm>

#include "coinroute/error.hpp"

namespace coinroute {

namespace {

void check_dest(const CompiledNetwork& net, int dest) {
  if (dest < 0 || dest >= net.destination_count())
    throw Error(ErrorKind::Config, "unknown destination index " + std::to_string(dest));
}

const CompiledNetwork& net_of(const WaveSnapshot& s) {
  if (!s.net) throw Error(ErrorKind::State, "snapshot is not bound to a network");
  return *s.net;
}

}  // namespace

WaveSnapshot snapshot_of(const CompiledNetwork& net, const WaveState& state) {
  WaveSnapshot s;
  s.net = &net;
  s.throughput.assign(state.throughput().begin(), state.throughput().end());
  s.windowed.assign(state.windowed_load().begin(), state.windowed_load().end());
  return s;
}

double world_reward(const WaveSnapshot& s) {
  const auto& net = net_of(s);
  const int dests = net.destination_count();
  double g = 0.0;
  for (int r = 0; r < net.node_count(); ++r) {
    const auto& v = net.cost(r);
    if (v.is_zero()) continue;
    double n = 0.0, z = 0.0;
    for (int d = 0; d < dests; ++d) {
      n += s.throughput[net.slot(r, d)];
      z += s.windowed[net.slot(r, d)];
    }
    if (n != 0.0) g += n * v(z);
  }
  return g;
}

WaveSnapshot clamp_destination(const WaveSnapshot& s, int dest) {
  const auto& net = net_of(s);
  check_dest(net, dest);
  WaveSnapshot c = s;
  for (int r = 0; r < net.node_count(); ++r) {
    c.throughput[net.slot(r, dest)] = 0.0;
    c.windowed[net.slot(r, dest)] = 0.0;
  }
  return c;
}

double wave_wlr(const WaveSnapshot& s, int dest) {
  const auto& net = net_of(s);
  check_dest(net, dest);
  const int dests = net.destination_count();
  double total = 0.0;
  for (int r = 0; r < net.node_count(); ++r) {
    const auto& v = net.cost(r);
    if (v.is_zero()) continue;
    double n_all = 0.0, z_all = 0.0, n_rest = 0.0, z_rest = 0.0;
    for (int d = 0; d < dests; ++d) {
      const double x = s.throughput[net.slot(r, d)];
      const double big_x = s.windowed[net.slot(r, d)];
      n_all += x;
      z_all += big_x;
      if (d != dest) {
        n_rest += x;
        z_rest += big_x;
      }
    }
    const double with = n_all != 0.0 ? n_all * v(z_all) : 0.0;
    const double without = n_rest != 0.0 ? n_rest * v(z_rest) : 0.0;
    total += with - without;
  }
  return total;
}

WaveSnapshot hypothetical_snapshot(const CompiledNetwork& net, const WaveState& state, int slot,
                                   int candidate, double inflow) {
  if (slot < 0 || slot >= net.slot_count()) throw Error(ErrorKind::Config, "slot out of range");
  const auto& opts = net.options(slot);
  if (std::find(opts.begin(), opts.end(), candidate) == opts.end())
    throw Error(ErrorKind::Routing, "candidate '" + (candidate >= 0 && candidate < net.node_count()
                                                         ? net.name(candidate)
                                                         : std::to_string(candidate)) +
                                        "' is not an option of node '" +
                                        net.name(net.slot_node(slot)) + "'");
  const int d = net.slot_dest(slot);
  const int target = net.destination_node(d);
  const auto& last = state.last_decisions();
  const auto x_prev = state.throughput();

  // Change of this wave's throughput for destination d, relative to last wave.
  std::vector<double> delta(net.slot_count(), 0.0);
  auto walk = [&](int from, double amount) {
    for (int u = from; u >= 0;) {
      delta[net.slot(u, d)] += amount;
      if (u == target) break;
      u = last.next_hop(net.slot(u, d));
    }
  };
  const double prev = x_prev[slot];
  if (prev != 0.0) walk(last.next_hop(slot), -prev);
  delta[slot] += inflow - prev;
  if (inflow != 0.0) walk(candidate, inflow);

  const double w_next = std::min(state.filled() + 1, state.window_waves());
  WaveSnapshot s;
  s.net = &net;
  s.windowed.assign(state.windowed_load().begin(), state.windowed_load().end());
  for (int i = 0; i < net.slot_count(); ++i)
    if (delta[i] != 0.0) s.windowed[i] = std::max(0.0, s.windowed[i] + delta[i] / w_next);
  s.throughput = s.windowed;
  return s;
}

double hypothetical_wlr(const CompiledNetwork& net, const WaveState& state, int slot, int candidate,
                        double inflow) {
  return wave_wlr(hypothetical_snapshot(net, state, slot, candidate, inflow), net.slot_dest(slot));
}

}  // namespace coinroute
