#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coinroute/benchmarks.hpp"
#include "coinroute/engine.hpp"
#include "coinroute/routing.hpp"

namespace coinroute {

/// One `[Family]` section of an experiment file.
struct FamilyPlan {
  Family family = Family::Hex;
  std::vector<Variant> variants{Variant::NetA, Variant::NetB};
  std::vector<std::vector<std::uint32_t>> regimes;
  std::vector<Policy> policies{Policy::ISPA};
  std::vector<double> steering{0.5};
  std::optional<MetricMode> metric;  // unset: the family default
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int runs = 20;
  SimConfig sim;
  int bootstrap_waves = 100;
  double epsilon = 0.02;
  int threads = 0;  // 0: hardware concurrency
  std::string output;
  std::vector<FamilyPlan> plans;

  /// Throws Error(Config) on runs < 1, a regime of the wrong length, or
  /// invalid simulation settings.
  void validate() const;
};

MetricMode default_metric(Family f);

/// Seed of run `index` under `master`.
std::uint64_t run_seed(std::uint64_t master, int index);

/// Parses the `key = value` experiment format. Throws Error(Parse) with a
/// line number.
ExperimentConfig parse_experiment(std::string_view text);
ExperimentConfig load_experiment(const std::string& path);

struct ReportRow {
  Family family = Family::Hex;
  Variant variant = Variant::NetA;
  std::vector<std::uint32_t> regime;
  Policy policy = Policy::ISPA;
  std::optional<double> steering;  // MB rows only
  MetricMode metric = MetricMode::GlobalPerPacket;
  double mean = 0.0;
  double stddev = 0.0;  // across runs
  std::optional<bool> braess;  // NetB rows with a NetA counterpart

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct CellFailure {
  std::string cell;
  std::string message;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<CellFailure> failures;
  double epsilon = 0.02;
};

/// Runs every (family, regime, variant, policy, steering) cell `runs` times
/// on a thread pool. A failing cell is reported and skipped.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// One MB row per steering value per regime and variant. Throws
/// Error(Config) when no section lists MB.
ExperimentReport steering_sweep(const ExperimentConfig& config, const std::vector<double>& values);

/// Sets the braess flag of every NetB row that has a matching NetA row.
void flag_braess(ExperimentReport& report, double epsilon);

struct BraessEntry {
  Family family = Family::Hex;
  std::vector<std::uint32_t> regime;
  Policy policy = Policy::ISPA;
  std::optional<double> steering;
  double net_a = 0.0;
  double net_b = 0.0;
  bool paradox = false;
};

struct BraessSummary {
  std::vector<BraessEntry> entries;
  std::map<std::string, int> paradox_count;  // keyed by policy name
  std::vector<std::string> notes;            // cells skipped for a missing variant
};

BraessSummary braess_check(const ExperimentReport& report, double epsilon);

std::string format_regime(const std::vector<std::uint32_t>& regime);  // "2-2"
std::vector<std::uint32_t> parse_regime(std::string_view text);

void write_report_csv(std::ostream& out, const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);
/// Throws Error(Parse) with a line number.
ExperimentReport parse_report_csv(std::string_view text);

}  // namespace coinroute
