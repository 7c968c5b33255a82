#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "coinroute/benchmarks.hpp"
#include "coinroute/cost_function.hpp"
#include "coinroute/error.hpp"
#include "coinroute/network.hpp"
#include "helpers.hpp"

using namespace coinroute;

TEST_CASE("cost function evaluation") {
  CHECK(eval_cost(CostFunction::linear(10), 1.0) == 10.0);
  CHECK(eval_cost(CostFunction::zero(), 7.0) == 0.0);
  CHECK(eval_cost(CostFunction::log1p(50), 1.0) == doctest::Approx(50.6931).epsilon(1e-6));
  CHECK(eval_cost(CostFunction::cubic(1), 2.0) == 8.0);
  CHECK(CostFunction::linear(1, 50)(0.0) == 50.0);

  const CostFunction all{1, 2, 3, 4, 5};
  const double x = 1.7;
  CHECK(all(x) == doctest::Approx(1 + 2 * x + 3 * x * x + 4 * x * x * x + 5 * std::log(1 + x)));
  CHECK(all.derivative(x) == doctest::Approx(2 + 6 * x + 12 * x * x + 5 / (1 + x)));
}

TEST_CASE("negative or non-finite load is a domain error") {
  const auto f = CostFunction::linear(1);
  CHECK_THROWS_AS(f(-0.5), Error);
  try {
    f(-1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK_THROWS_AS(f(std::nan("")), Error);
  CHECK_THROWS_AS(f(INFINITY), Error);
}

TEST_CASE("non-negative coefficients give non-decreasing costs") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coef(0.0, 5.0), load(0.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    CostFunction f{coef(rng), coef(rng), coef(rng), coef(rng), coef(rng)};
    REQUIRE(f.is_monotone());
    double a = load(rng), b = load(rng);
    if (a > b) std::swap(a, b);
    CHECK(f(a) <= f(b));
  }
}

TEST_CASE("describe renders the non-zero terms") {
  CHECK(describe(CostFunction::zero()) == "0");
  CHECK(describe(CostFunction::log1p(50)) == "50 + ln(1+x)");
  CHECK(describe(CostFunction::linear(10)) == "10x");
}

namespace {

std::size_t count_kind(const NetworkSpec& s, NodeKind k) {
  std::size_t n = 0;
  for (const auto& node : s.nodes) n += node.kind == k;
  return n;
}

}  // namespace

TEST_CASE("hex benchmark shape") {
  const std::uint32_t one[] = {1};
  const auto a = build_benchmark({Family::Hex, Variant::NetA}, one);
  CHECK(count_kind(a, NodeKind::Source) == 1);
  CHECK(count_kind(a, NodeKind::Dummy) == 2);
  CHECK(count_kind(a, NodeKind::Destination) == 1);
  CHECK(count_kind(a, NodeKind::Router) == 4);
  const auto report = validate_network(a);
  CHECK(report.valid());
  CHECK(report.wave_length == 4);

  const auto b = build_benchmark({Family::Hex, Variant::NetB}, one);
  CHECK(b.find("V3") != nullptr);
  CHECK(b.find("V3")->cost == CostFunction::linear(1, 10));
  CHECK(validate_network(b).valid());

  // the crossing path at load 1 costs 2*(10x) + (10+x) = 31
  double cross = 0.0;
  for (const auto& id : {"V1L", "V3", "V1R"}) cross += b.find(id)->cost(1.0);
  CHECK(cross == 31.0);
}

TEST_CASE("path counts per benchmark") {
  auto paths = [](Family f, Variant v, std::vector<std::uint32_t> loads, const char* s, const char* d) {
    return enumerate_paths(build_benchmark({f, v}, loads), s, d);
  };
  CHECK(paths(Family::Hex, Variant::NetA, {1}, "S", "D").size() == 2);
  CHECK(paths(Family::Hex, Variant::NetB, {1}, "S", "D").size() == 3);
  CHECK(paths(Family::Bootes4, Variant::NetA, {1, 1}, "S1", "D").size() == 1);
  CHECK(paths(Family::Bootes4, Variant::NetB, {1, 1}, "S1", "D").size() == 2);
  CHECK(paths(Family::Bootes4, Variant::NetA, {1, 1}, "S2", "D").size() == 1);
  CHECK(paths(Family::Bootes4, Variant::NetB, {1, 1}, "S2", "D").size() == 1);
  CHECK(paths(Family::Butterfly, Variant::NetA, {1, 1, 1}, "S2", "D2").size() == 2);
  CHECK(paths(Family::Hex, Variant::NetA, {1}, "D", "S").empty());
}

TEST_CASE("enumerate_paths is lexicographic and every commodity path has one hop count") {
  for (const auto& b : testing::every_benchmark()) {
    const auto spec = build_benchmark({b.family, b.variant}, b.loads);
    for (const auto& c : spec.commodities) {
      const auto ps = enumerate_paths(spec, c.source, c.destination);
      REQUIRE(!ps.empty());
      std::set<std::size_t> lengths;
      for (const auto& p : ps) {
        lengths.insert(p.size());
        CHECK(p.front() == c.source);
        CHECK(p.back() == c.destination);
      }
      CHECK(lengths.size() == 1);
      CHECK(std::is_sorted(ps.begin(), ps.end()));
    }
    CHECK(validate_network(spec).valid());
  }
}

TEST_CASE("build_benchmark is deterministic and checks the load count") {
  const std::uint32_t loads[] = {4, 2};
  CHECK(to_text(build_benchmark({Family::Ray, Variant::NetB}, loads)) ==
        to_text(build_benchmark({Family::Ray, Variant::NetB}, loads)));
  try {
    build_benchmark({Family::Hex, Variant::NetA}, loads);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  CHECK(parse_family("Butterfly") == Family::Butterfly);
  CHECK_FALSE(parse_family("Torus").has_value());
  CHECK(parse_variant("B") == Variant::NetB);
  CHECK_FALSE(parse_variant("NetC").has_value());
}

TEST_CASE("benchmark cost families") {
  const std::uint32_t two[] = {1, 1};
  const auto b4 = build_benchmark({Family::Bootes4, Variant::NetB}, two);
  CHECK(b4.find("V1")->cost == CostFunction::log1p(50));
  CHECK(b4.find("V2")->cost == CostFunction::linear(10));
  CHECK(b4.find("V3")->cost == CostFunction::log1p(0));
  // (V1(1) + V2(1)) / 2 for one packet per source
  CHECK((b4.find("V1")->cost(1) + b4.find("V2")->cost(1)) / 2 == doctest::Approx((60 + std::log(2.0)) / 2));
  const std::uint32_t one[] = {1};
  const auto hl = build_benchmark({Family::HexLog, Variant::NetB}, one);
  CHECK(hl.find("V2L")->cost == CostFunction::log1p(50));
  CHECK(hl.find("V3")->cost == CostFunction::log1p(0));
}

namespace {

NetworkSpec tiny() {
  NetworkSpec s;
  s.nodes = {{"S", NodeKind::Source, {}},
             {"A", NodeKind::Router, CostFunction::linear(1)},
             {"B", NodeKind::Router, CostFunction::linear(2)},
             {"D", NodeKind::Destination, {}}};
  s.edges = {{"S", "A"}, {"S", "B"}, {"A", "D"}, {"B", "D"}};
  s.commodities = {{"S", "D", 3}};
  return s;
}

}  // namespace

TEST_CASE("validation violations") {
  CHECK(validate_network(tiny()).valid());
  CHECK(validate_network(tiny()).wave_length == 2);

  auto cyc = tiny();
  cyc.edges.push_back({"A", "B"});
  cyc.edges.push_back({"B", "A"});
  CHECK(validate_network(cyc).has("acyclicity"));

  auto uneven = tiny();
  uneven.nodes.push_back({"C", NodeKind::Router, CostFunction::linear(1)});
  uneven.edges.push_back({"A", "C"});
  uneven.edges.push_back({"C", "D"});
  CHECK(validate_network(uneven).has("wave-length"));

  auto dummy = tiny();
  dummy.nodes[1].kind = NodeKind::Dummy;
  CHECK(validate_network(dummy).has("dummy-cost"));

  auto unreachable = tiny();
  unreachable.edges = {{"S", "A"}, {"S", "B"}};
  CHECK(validate_network(unreachable).has("reachability"));

  auto negative = tiny();
  negative.nodes[1].cost.c1 = -1;
  CHECK(validate_network(negative).has("cost-monotonicity"));

  auto into_source = tiny();
  into_source.edges.push_back({"A", "S"});
  CHECK(validate_network(into_source).has("source-incoming"));

  auto out_of_dest = tiny();
  out_of_dest.nodes.push_back({"E", NodeKind::Destination, {}});
  out_of_dest.edges.push_back({"D", "E"});
  CHECK(validate_network(out_of_dest).has("destination-outgoing"));

  auto dup = tiny();
  dup.nodes.push_back({"A", NodeKind::Router, {}});
  CHECK(validate_network(dup).has("duplicate-node"));

  auto unknown = tiny();
  unknown.edges.push_back({"A", "Q"});
  CHECK(validate_network(unknown).has("unknown-node"));

  CHECK_THROWS_AS(CompiledNetwork{cyc}, Error);
}

TEST_CASE("network text round trip") {
  for (const auto& b : testing::every_benchmark()) {
    const auto spec = build_benchmark({b.family, b.variant}, b.loads);
    const auto text = to_text(spec);
    const auto back = parse_network(text);
    CHECK(to_text(back) == text);
    CHECK(back.nodes.size() == spec.nodes.size());
    CHECK(back.edges.size() == spec.edges.size());
    for (const auto& n : spec.nodes) CHECK(back.find(n.id)->cost == n.cost);
  }
  auto odd = tiny();
  odd.nodes[1].cost = {0.1, 1.0 / 3.0, 1e-17, 0, 2.5};
  CHECK(parse_network(to_text(odd)).find("A")->cost == odd.nodes[1].cost);
}

TEST_CASE("network parse errors carry the line number") {
  const char* text = "node S source 0 0 0 0 0\n# comment\nnode A router 1 x 0 0 0\n";
  try {
    parse_network(text);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_network("wire S A\n"), Error);
  CHECK_THROWS_AS(parse_network("flow S D -2\n"), Error);
  CHECK_THROWS_AS(load_network("/nonexistent/coinroute.net"), Error);
}

TEST_CASE("compiled network slots and options") {
  const auto net = testing::bench(Family::Hex, Variant::NetB, {1});
  CHECK(net.destination_count() == 1);
  const int s = testing::slot(net, "S");
  CHECK(net.options(s).size() == 2);
  CHECK(net.is_branching(s));
  CHECK(net.is_branching(testing::slot(net, "V1L")));
  CHECK_FALSE(net.is_branching(testing::slot(net, "V2R")));
  CHECK(net.options(testing::slot(net, "D")).empty());
  CHECK(net.wave_length() == 4);
  CHECK(net.packets_per_wave() == 1);

  const auto bf = testing::bench(Family::Butterfly, Variant::NetA, {1, 2, 3});
  CHECK(bf.destination_count() == 2);
  CHECK(bf.packets_per_wave() == 6);
  // V2 reaches both destinations; toward D1 it has only the direct link
  const int d1 = *bf.destination_index("D1");
  CHECK(bf.options(bf.slot(testing::node(bf, "V2"), d1)).size() == 1);

  NetworkSpec no_flow = tiny();
  no_flow.commodities.clear();
  CHECK_THROWS_AS(CompiledNetwork{no_flow}, Error);
}
