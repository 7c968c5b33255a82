#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "coinroute/error.hpp"
#include "coinroute/harness.hpp"

using namespace coinroute;

namespace {

const char* kSmall = R"(# small experiment
seed = 5
runs = 3
window = 50
warmup = 50
measure = 100
threads = 2

[Hex]
variants = NetA, NetB
regimes = 1; 3
policies = ISPA, MB
steering = 0.5
)";

ExperimentConfig small() { return parse_experiment(kSmall); }

int parse_error_line(const char* text) {
  try {
    parse_experiment(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    int line = 0;
    std::sscanf(e.what(), "line %d", &line);
    return line;
  }
  return -1;
}

}  // namespace

TEST_CASE("experiment file parsing") {
  const auto c = small();
  CHECK(c.seed == 5);
  CHECK(c.runs == 3);
  CHECK(c.sim.window_waves == 50);
  CHECK(c.threads == 2);
  REQUIRE(c.plans.size() == 1);
  CHECK(c.plans[0].family == Family::Hex);
  CHECK(c.plans[0].regimes == std::vector<std::vector<std::uint32_t>>{{1}, {3}});
  CHECK(c.plans[0].policies == std::vector<Policy>{Policy::ISPA, Policy::MB});
  CHECK_FALSE(c.plans[0].metric.has_value());

  const auto two = parse_experiment("[Bootes4]\nregimes = 1,1; 4-2\n[Ray]\nregimes = 3 3\nmetric = global\n");
  CHECK(two.runs == 20);
  CHECK(two.plans[0].regimes[1] == std::vector<std::uint32_t>{4, 2});
  CHECK(two.plans[1].regimes[0] == std::vector<std::uint32_t>{3, 3});
  CHECK(two.plans[1].metric == MetricMode::GlobalPerPacket);
  CHECK(default_metric(Family::Ray) == MetricMode::SumOverSources);
  CHECK(default_metric(Family::Bootes2) == MetricMode::GlobalPerPacket);
}

TEST_CASE("experiment file errors") {
  CHECK(parse_error_line("runs = 2\nbogus = 1\n") == 2);
  CHECK(parse_error_line("runs = 0\n") == 1);
  CHECK(parse_error_line("\n\n[Torus]\n") == 3);
  CHECK(parse_error_line("[Hex]\npolicies = ISPA, Dijkstra\n") == 2);
  CHECK(parse_error_line("[Hex]\nregimes = 1; x\n") == 2);
  CHECK(parse_error_line("[Hex\n") == 1);
  CHECK(parse_error_line("[Hex]\nseed = 3\n") == 2);
  CHECK(parse_error_line("window 5\n") == 1);
  try {
    parse_experiment("[Bootes4]\nregimes = 1\n");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  CHECK_THROWS_AS(parse_experiment("[Hex]\nsteering = 1.5\n"), Error);
  CHECK_THROWS_AS(load_experiment("/nonexistent/exp.cfg"), Error);
}

TEST_CASE("regime text") {
  CHECK(format_regime({2, 2}) == "2-2");
  CHECK(format_regime({4}) == "4");
  CHECK(parse_regime("6-3") == std::vector<std::uint32_t>{6, 3});
  CHECK_THROWS_AS(parse_regime(""), Error);
  CHECK_THROWS_AS(parse_regime("1-a"), Error);
}

TEST_CASE("per-run seeds") {
  CHECK(run_seed(1, 0) == run_seed(0, 1));
  CHECK(run_seed(1, 0) != run_seed(1, 1));
  CHECK(run_seed(7, 3) == splitmix64(10));
}

TEST_CASE("run_experiment: rows, determinism, thread independence") {
  auto c = small();
  const auto r1 = run_experiment(c);
  CHECK(r1.failures.empty());
  CHECK(r1.rows.size() == 8);  // 2 regimes x 2 variants x 2 policies
  c.threads = 1;
  const auto r2 = run_experiment(c);
  CHECK(r1.rows == r2.rows);
  for (const auto& row : r1.rows) {
    CHECK(row.steering.has_value() == (row.policy == Policy::MB));
    CHECK(row.braess.has_value() == (row.variant == Variant::NetB));
  }
  c.runs = 1;
  for (const auto& row : run_experiment(c).rows) CHECK(row.stddev == 0.0);
}

TEST_CASE("CSV round trip") {
  const auto r = run_experiment(small());
  const auto csv = report_to_csv(r);
  CHECK(csv.rfind("family,variant,regime,policy,steering,metric_mode,mean,stddev,braess\n", 0) == 0);
  const auto back = parse_report_csv(csv);
  CHECK(back.rows == r.rows);
  CHECK(report_to_csv(back) == csv);
  CHECK_THROWS_AS(parse_report_csv("family,variant\n"), Error);
  CHECK_THROWS_AS(parse_report_csv(""), Error);
  CHECK_THROWS_AS(
      parse_report_csv("family,variant,regime,policy,steering,metric_mode,mean,stddev,braess\nHex,NetA,1,ISPA,-,global-per-packet,abc,0,-\n"),
      Error);
}

TEST_CASE("braess check on Bootes4 and Hex") {
  SUBCASE("Bootes4 ISPA") {
    const auto c = parse_experiment("runs = 4\n[Bootes4]\nregimes = 1,1; 2,2; 4,2; 6,3\n");
    const auto s = braess_check(run_experiment(c), 0.02);
    REQUIRE(s.entries.size() == 4);
    CHECK_FALSE(s.entries[0].paradox);
    CHECK(s.entries[1].paradox);
    CHECK(s.entries[2].paradox);
    CHECK(s.entries[3].paradox);
    CHECK(s.paradox_count.at("ISPA") == 3);
  }
  SUBCASE("Hex ISPA and FK") {
    const auto c = parse_experiment("runs = 4\n[Hex]\nregimes = 1; 2; 3; 4\npolicies = ISPA, FK\n");
    const auto report = run_experiment(c);
    const auto s = braess_check(report, 0.02);
    for (const auto& e : s.entries) {
      if (e.policy == Policy::ISPA) CHECK(e.paradox == (e.regime[0] >= 3));
      else CHECK(e.net_b <= e.net_a + 0.05);
    }
    CHECK(s.paradox_count.at("FK") == 0);
  }
}

TEST_CASE("braess check notes missing variants") {
  ExperimentReport r;
  ReportRow b;
  b.variant = Variant::NetB;
  b.regime = {2};
  b.mean = 10;
  r.rows.push_back(b);
  const auto s = braess_check(r, 0.02);
  CHECK(s.entries.empty());
  CHECK(s.notes.size() == 1);
  flag_braess(r, 0.02);
  CHECK_FALSE(r.rows[0].braess.has_value());
}

TEST_CASE("steering sweep") {
  auto c = small();
  const auto r = steering_sweep(c, {0.0, 1.0});
  CHECK(r.rows.size() == 2 * 2 * 2);
  for (const auto& row : r.rows) CHECK(row.policy == Policy::MB);
  c.plans[0].policies = {Policy::ISPA};
  CHECK_THROWS_AS(steering_sweep(c, {0.5}), Error);
  CHECK_THROWS_AS(steering_sweep(small(), {1.5}), Error);
}

TEST_CASE("stable regimes have tight spreads over 20 runs") {
  const auto c = parse_experiment("[Hex]\nvariants = NetA\nregimes = 1; 2; 3; 4\n[Bootes4]\nvariants = NetA\nregimes = 1,1; 2,2; 4,2; 6,3\n");
  const auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 8);
  for (const auto& row : r.rows) CHECK(row.stddev < 0.05);
}

TEST_CASE("a failing cell is reported and the rest still run") {
  auto c = small();
  c.plans[0].policies = {Policy::ISPA, Policy::MB};
  c.bootstrap_waves = 0;  // MB cannot start without data
  const auto r = run_experiment(c);
  CHECK(r.failures.size() == 4);
  CHECK(r.rows.size() == 4);
}
