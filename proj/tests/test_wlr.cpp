#include <doctest.h>

#include <cmath>
#include <random>

#include "coinroute/error.hpp"
#include "coinroute/routing.hpp"
#include "coinroute/wlr.hpp"
#include "helpers.hpp"

using namespace coinroute;
using testing::bench;
using testing::node;
using testing::slot;

namespace {

WaveSnapshot random_snapshot(const CompiledNetwork& net, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 9.0);
  WaveSnapshot s;
  s.net = &net;
  for (int i = 0; i < net.slot_count(); ++i) {
    s.throughput.push_back(std::floor(u(rng)));
    s.windowed.push_back(u(rng));
  }
  return s;
}

// G computed from first principles, without the library's grouping.
double oracle_world(const WaveSnapshot& s, int skip_dest) {
  const auto& net = *s.net;
  double g = 0.0;
  for (int r = 0; r < net.node_count(); ++r) {
    double z = 0.0;
    for (int d = 0; d < net.destination_count(); ++d)
      if (d != skip_dest) z += s.windowed[net.slot(r, d)];
    for (int d = 0; d < net.destination_count(); ++d)
      if (d != skip_dest) g += s.throughput[net.slot(r, d)] * net.cost(r)(z);
  }
  return g;
}

}  // namespace

TEST_CASE("expanded WLR equals the clamped difference") {
  std::mt19937_64 rng(17);
  for (const auto& b : testing::every_benchmark()) {
    const auto net = bench(b.family, b.variant, b.loads);
    for (int i = 0; i < 300; ++i) {
      const auto s = random_snapshot(net, rng);
      const double g = world_reward(s);
      CHECK(g == doctest::Approx(oracle_world(s, -1)).epsilon(1e-12));
      for (int d = 0; d < net.destination_count(); ++d) {
        const double w = wave_wlr(s, d);
        CHECK(std::abs(w - (g - world_reward(clamp_destination(s, d)))) <= 1e-9);
        CHECK(std::abs(w - (oracle_world(s, -1) - oracle_world(s, d))) <= 1e-9);
      }
    }
  }
}

TEST_CASE("clamping zeroes one destination and nothing else") {
  std::mt19937_64 rng(2);
  const auto net = bench(Family::Butterfly, Variant::NetB, {1, 2, 3});
  const auto s = random_snapshot(net, rng);
  const auto c = clamp_destination(s, 0);
  for (int r = 0; r < net.node_count(); ++r) {
    CHECK(c.throughput[net.slot(r, 0)] == 0.0);
    CHECK(c.windowed[net.slot(r, 0)] == 0.0);
    CHECK(c.throughput[net.slot(r, 1)] == s.throughput[net.slot(r, 1)]);
    CHECK(c.windowed[net.slot(r, 1)] == s.windowed[net.slot(r, 1)]);
  }
  const auto cc = clamp_destination(c, 0);
  CHECK(cc.throughput == c.throughput);
  CHECK(cc.windowed == c.windowed);
  CHECK_THROWS_AS(clamp_destination(s, 2), Error);
  CHECK_THROWS_AS(wave_wlr(s, -1), Error);
}

TEST_CASE("single destination: WLR is the world reward") {
  std::mt19937_64 rng(4);
  const auto net = bench(Family::Hex, Variant::NetA, {2});
  for (int i = 0; i < 50; ++i) {
    const auto s = random_snapshot(net, rng);
    const auto c = clamp_destination(s, 0);
    CHECK(world_reward(c) == 0.0);
    CHECK(wave_wlr(s, 0) == doctest::Approx(world_reward(s)));
  }
  WaveSnapshot zero;
  zero.net = &net;
  zero.throughput.assign(net.slot_count(), 0.0);
  zero.windowed.assign(net.slot_count(), 0.0);
  CHECK(wave_wlr(zero, 0) == 0.0);
}

TEST_CASE("two-destination WLR on a hand-built three-router snapshot") {
  // routers P (shared), Q (d0 only), R (d1 only)
  NetworkSpec spec;
  spec.nodes = {{"S0", NodeKind::Source, {}},
                {"S1", NodeKind::Source, {}},
                {"P", NodeKind::Router, CostFunction::linear(2, 1)},
                {"Q", NodeKind::Router, CostFunction::quadratic(1)},
                {"R", NodeKind::Router, CostFunction::log1p(3)},
                {"D0", NodeKind::Destination, {}},
                {"D1", NodeKind::Destination, {}}};
  spec.edges = {{"S0", "P"}, {"S1", "P"}, {"P", "Q"}, {"P", "R"}, {"Q", "D0"}, {"R", "D1"}};
  spec.commodities = {{"S0", "D0", 1}, {"S1", "D1", 1}};
  CompiledNetwork net(spec);
  const int d0 = *net.destination_index("D0");
  WaveSnapshot s;
  s.net = &net;
  s.throughput.assign(net.slot_count(), 0.0);
  s.windowed.assign(net.slot_count(), 0.0);
  auto set = [&](const char* id, int d, double x, double big_x) {
    s.throughput[net.slot(node(net, id), d)] = x;
    s.windowed[net.slot(node(net, id), d)] = big_x;
  };
  set("P", d0, 2, 1.5);
  set("P", 1 - d0, 3, 2.5);
  set("Q", d0, 2, 1.5);
  set("R", 1 - d0, 3, 2.5);
  // with D0: P carries 5 at load 4 -> 5*9; Q 2*1.5^2; R 3*(3+ln 3.5)
  // without D0: P carries 3 at load 2.5 -> 3*6; Q nothing; R unchanged
  const double expect = 5 * 9.0 + 2 * 2.25 - 3 * 6.0;
  CHECK(wave_wlr(s, d0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(world_reward(s) - world_reward(clamp_destination(s, d0)) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("hypothetical WLR on Hex NetB from an empty history prefers the crossing") {
  const auto net = bench(Family::Hex, Variant::NetB, {1});
  WaveState state(net, 10);
  const int s = slot(net, "S");
  // one wave on the crossing so that V1L's last decision is the bridge
  DecisionMap d(net);
  d.set(slot(net, "V1L"), node(net, "V3"));
  d.set(s, node(net, "V1L"));
  run_wave(net, state, d);
  const double left = hypothetical_wlr(net, state, s, node(net, "V1L"), 1);
  const double right = hypothetical_wlr(net, state, s, node(net, "V2R"), 1);
  CHECK(left < right);
  CHECK_THROWS_AS(hypothetical_wlr(net, state, s, node(net, "V3"), 1), Error);
}

TEST_CASE("symmetric Hex NetA candidates have equal hypothetical WLR") {
  const auto net = bench(Family::Hex, Variant::NetA, {2});
  WaveState state(net, 10);
  const int s = slot(net, "S");
  const double l = hypothetical_wlr(net, state, s, node(net, "V1L"), 2);
  const double r = hypothetical_wlr(net, state, s, node(net, "V2R"), 2);
  CHECK(l == doctest::Approx(r).epsilon(1e-15));
}

TEST_CASE("hypothetical snapshot moves only the acting node's traffic") {
  std::mt19937_64 rng(8);
  const auto net = bench(Family::Butterfly, Variant::NetB, {2, 3, 1});
  WaveState state(net, 5);
  for (int w = 0; w < 7; ++w) {
    DecisionMap d(net);
    for (int s : net.routable_slots()) {
      const auto& o = net.options(s);
      d.set(s, o[rng() % o.size()]);
    }
    run_wave(net, state, d);
  }
  const int s1 = slot(net, "S1", *net.destination_index("D1"));
  for (int c : net.options(s1)) {
    const auto h = hypothetical_snapshot(net, state, s1, c, 2);
    const int other = 1 - net.slot_dest(s1);
    for (int r = 0; r < net.node_count(); ++r)
      CHECK(h.windowed[net.slot(r, other)] == state.windowed_load()[net.slot(r, other)]);
    CHECK(h.throughput == h.windowed);
    for (double v : h.windowed) CHECK(v >= 0.0);
  }
  // a single-option node: the hypothetical of its only option with last
  // wave's inflow reproduces the windowed loads one wave on
  const int v2 = slot(net, "V2", *net.destination_index("D1"));
  REQUIRE(net.options(v2).size() == 1);
  const auto same = hypothetical_snapshot(net, state, v2, net.options(v2)[0], state.throughput()[v2]);
  for (int i = 0; i < net.slot_count(); ++i) CHECK(same.windowed[i] == state.windowed_load()[i]);
}
