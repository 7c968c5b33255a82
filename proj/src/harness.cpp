#include "coinroute/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "coinroute/error.hpp"

namespace coinroute {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

template <class T>
std::optional<T> number(std::string_view s) {
  s = trim(s);
  T v{};
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
  return v;
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

MetricMode default_metric(Family f) {
  return f == Family::Butterfly || f == Family::Ray ? MetricMode::SumOverSources
                                                     : MetricMode::GlobalPerPacket;
}

std::uint64_t run_seed(std::uint64_t master, int index) {
  return splitmix64(master + static_cast<std::uint64_t>(index));
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw Error(ErrorKind::Config, "runs must be >= 1");
  if (bootstrap_waves < 0) throw Error(ErrorKind::Config, "bootstrap must be >= 0");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::Config, "epsilon must be >= 0");
  sim.validate();
  for (const auto& p : plans) {
    const auto n = static_cast<std::size_t>(source_count(p.family));
    for (const auto& r : p.regimes)
      if (r.size() != n)
        throw Error(ErrorKind::Config, std::string(to_string(p.family)) + " regime '" +
                                           format_regime(r) + "' needs " + std::to_string(n) +
                                           " loads");
    for (double s : p.steering)
      if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::Config, "steering must lie in [0,1]");
  }
}

std::string format_regime(const std::vector<std::uint32_t>& regime) {
  std::string s;
  for (std::size_t i = 0; i < regime.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(regime[i]);
  }
  return s;
}

std::vector<std::uint32_t> parse_regime(std::string_view text) {
  std::vector<std::uint32_t> out;
  std::string cleaned(trim(text));
  for (char& c : cleaned)
    if (c == '-' || c == ',' || c == ' ' || c == '\t') c = ' ';
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) {
    auto v = number<std::uint32_t>(tok);
    if (!v) throw Error(ErrorKind::Parse, "bad load '" + tok + "' in regime");
    out.push_back(*v);
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "empty regime");
  return out;
}

ExperimentConfig parse_experiment(std::string_view text) {
  ExperimentConfig cfg;
  FamilyPlan* plan = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      const auto fam = parse_family(name);
      if (!fam) parse_fail(line_no, "unknown benchmark family '" + std::string(name) + "'");
      cfg.plans.push_back({});
      plan = &cfg.plans.back();
      plan->family = *fam;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto need_int = [&](int lo) {
      auto v = number<int>(value);
      if (!v || *v < lo) parse_fail(line_no, std::string(key) + " must be an integer >= " + std::to_string(lo));
      return *v;
    };
    auto need_real = [&](std::string_view s) {
      auto v = number<double>(s);
      if (!v) parse_fail(line_no, "bad number '" + std::string(s) + "'");
      return *v;
    };

    if (!plan) {
      if (key == "seed") {
        auto v = number<std::uint64_t>(value);
        if (!v) parse_fail(line_no, "seed must be a non-negative integer");
        cfg.seed = *v;
      } else if (key == "runs") {
        cfg.runs = need_int(1);
      } else if (key == "window") {
        cfg.sim.window_waves = need_int(1);
      } else if (key == "warmup") {
        cfg.sim.warmup_waves = need_int(0);
      } else if (key == "measure") {
        cfg.sim.measure_waves = need_int(1);
      } else if (key == "bootstrap") {
        cfg.bootstrap_waves = need_int(0);
      } else if (key == "epsilon") {
        cfg.epsilon = need_real(value);
      } else if (key == "threads") {
        cfg.threads = need_int(0);
      } else if (key == "output") {
        cfg.output = std::string(value);
      } else {
        parse_fail(line_no, "unknown key '" + std::string(key) + "'");
      }
      continue;
    }

    if (key == "variants") {
      plan->variants.clear();
      for (auto v : split(value, ',')) {
        auto var = parse_variant(v);
        if (!var) parse_fail(line_no, "unknown variant '" + std::string(v) + "'");
        plan->variants.push_back(*var);
      }
    } else if (key == "regimes") {
      plan->regimes.clear();
      for (auto r : split(value, ';')) {
        if (r.empty()) continue;
        try {
          plan->regimes.push_back(parse_regime(r));
        } catch (const Error& e) {
          parse_fail(line_no, e.what());
        }
      }
    } else if (key == "policies") {
      plan->policies.clear();
      for (auto v : split(value, ',')) {
        auto p = parse_policy(v);
        if (!p) parse_fail(line_no, "unknown policy '" + std::string(v) + "'");
        plan->policies.push_back(*p);
      }
    } else if (key == "steering") {
      plan->steering.clear();
      for (auto v : split(value, ',')) plan->steering.push_back(need_real(v));
    } else if (key == "metric") {
      auto m = parse_metric_mode(value);
      if (!m) parse_fail(line_no, "unknown metric '" + std::string(value) + "'");
      plan->metric = *m;
    } else {
      parse_fail(line_no, "unknown section key '" + std::string(key) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str());
}

namespace {

struct Cell {
  ReportRow row;
  SimConfig sim;
  PolicyConfig policy;
};

ExperimentReport run_cells(const ExperimentConfig& cfg, std::vector<Cell> cells) {
  const int runs = cfg.runs;
  const std::size_t tasks = cells.size() * static_cast<std::size_t>(runs);
  std::vector<std::vector<double>> results(cells.size(), std::vector<double>(runs, 0.0));
  std::vector<std::string> errors(cells.size());
  std::mutex mu;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      const std::size_t c = t / runs;
      const int r = static_cast<int>(t % runs);
      {
        std::lock_guard lock(mu);
        if (!errors[c].empty()) continue;
      }
      try {
        const auto& cell = cells[c];
        CompiledNetwork net(build_benchmark({cell.row.family, cell.row.variant}, cell.row.regime));
        SimConfig sim = cell.sim;
        sim.seed = run_seed(cfg.seed, r);
        const double v = run_policy(net, sim, cell.policy).cell.mean;
        std::lock_guard lock(mu);
        results[c][r] = v;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (errors[c].empty()) errors[c] = e.what();
      }
    }
  };

  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, std::min<int>(n, static_cast<int>(std::max<std::size_t>(tasks, 1))));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  ExperimentReport report;
  report.epsilon = cfg.epsilon;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto row = cells[c].row;
    if (!errors[c].empty()) {
      report.failures.push_back({std::string(to_string(row.family)) + "/" + to_string(row.variant) +
                                     "/" + format_regime(row.regime) + "/" + to_string(row.policy),
                                 errors[c]});
      continue;
    }
    double mu_v = 0.0;
    for (double v : results[c]) mu_v += v;
    mu_v /= runs;
    double var = 0.0;
    for (double v : results[c]) var += (v - mu_v) * (v - mu_v);
    row.mean = mu_v;
    row.stddev = runs > 1 ? std::sqrt(var / (runs - 1)) : 0.0;
    report.rows.push_back(std::move(row));
  }
  flag_braess(report, cfg.epsilon);
  return report;
}

Cell make_cell(const ExperimentConfig& cfg, const FamilyPlan& plan, Variant variant,
               const std::vector<std::uint32_t>& regime, Policy policy, std::optional<double> steering) {
  Cell c;
  c.row.family = plan.family;
  c.row.variant = variant;
  c.row.regime = regime;
  c.row.policy = policy;
  c.row.steering = steering;
  c.row.metric = plan.metric.value_or(default_metric(plan.family));
  c.sim = cfg.sim;
  c.sim.metric_mode = c.row.metric;
  c.policy.policy = policy;
  c.policy.steering = steering.value_or(0.5);
  c.policy.bootstrap_waves = cfg.bootstrap_waves;
  return c;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<Cell> cells;
  for (const auto& plan : config.plans)
    for (const auto& regime : plan.regimes)
      for (auto variant : plan.variants)
        for (auto policy : plan.policies) {
          if (policy == Policy::MB) {
            for (double s : plan.steering) cells.push_back(make_cell(config, plan, variant, regime, policy, s));
          } else {
            cells.push_back(make_cell(config, plan, variant, regime, policy, std::nullopt));
          }
        }
  return run_cells(config, std::move(cells));
}

ExperimentReport steering_sweep(const ExperimentConfig& config, const std::vector<double>& values) {
  config.validate();
  if (values.empty()) throw Error(ErrorKind::Config, "no steering values given");
  for (double s : values)
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::Config, "steering must lie in [0,1]");
  std::vector<Cell> cells;
  for (const auto& plan : config.plans) {
    if (std::find(plan.policies.begin(), plan.policies.end(), Policy::MB) == plan.policies.end()) continue;
    for (const auto& regime : plan.regimes)
      for (auto variant : plan.variants)
        for (double s : values) cells.push_back(make_cell(config, plan, variant, regime, Policy::MB, s));
  }
  if (cells.empty()) throw Error(ErrorKind::Config, "steering sweep needs a section that lists MB");
  return run_cells(config, std::move(cells));
}

namespace {

bool same_cell(const ReportRow& a, const ReportRow& b) {
  return a.family == b.family && a.regime == b.regime && a.policy == b.policy &&
         a.steering == b.steering && a.metric == b.metric;
}

const ReportRow* net_a_of(const ExperimentReport& report, const ReportRow& b) {
  for (const auto& r : report.rows)
    if (r.variant == Variant::NetA && same_cell(r, b)) return &r;
  return nullptr;
}

}  // namespace

void flag_braess(ExperimentReport& report, double epsilon) {
  for (auto& row : report.rows) {
    row.braess.reset();
    if (row.variant != Variant::NetB) continue;
    if (const auto* a = net_a_of(report, row)) row.braess = row.mean > a->mean * (1.0 + epsilon);
  }
}

BraessSummary braess_check(const ExperimentReport& report, double epsilon) {
  BraessSummary s;
  for (const auto& row : report.rows) {
    if (row.variant != Variant::NetB) continue;
    const auto* a = net_a_of(report, row);
    if (!a) {
      s.notes.push_back(std::string(to_string(row.family)) + " " + format_regime(row.regime) + " " +
                        to_string(row.policy) + ": no NetA cell, skipped");
      continue;
    }
    BraessEntry e;
    e.family = row.family;
    e.regime = row.regime;
    e.policy = row.policy;
    e.steering = row.steering;
    e.net_a = a->mean;
    e.net_b = row.mean;
    e.paradox = row.mean > a->mean * (1.0 + epsilon);
    s.paradox_count[to_string(row.policy)] += e.paradox ? 1 : 0;
    s.entries.push_back(std::move(e));
  }
  for (const auto& row : report.rows) {
    if (row.variant != Variant::NetA) continue;
    bool found = false;
    for (const auto& b : report.rows)
      if (b.variant == Variant::NetB && same_cell(row, b)) found = true;
    if (!found)
      s.notes.push_back(std::string(to_string(row.family)) + " " + format_regime(row.regime) + " " +
                        to_string(row.policy) + ": no NetB cell, skipped");
  }
  return s;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "family,variant,regime,policy,steering,metric_mode,mean,stddev,braess\n";
  for (const auto& r : report.rows) {
    out << to_string(r.family) << ',' << to_string(r.variant) << ',' << format_regime(r.regime) << ','
        << to_string(r.policy) << ',' << (r.steering ? fmt(*r.steering) : "-") << ','
        << to_string(r.metric) << ',' << fmt(r.mean) << ',' << fmt(r.stddev) << ','
        << (r.braess ? (*r.braess ? "1" : "0") : "-") << '\n';
  }
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream ss;
  write_report_csv(ss, report);
  return ss.str();
}

ExperimentReport parse_report_csv(std::string_view text) {
  ExperimentReport report;
  int line_no = 0;
  std::size_t pos = 0;
  bool header = false;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header) {
      if (line != "family,variant,regime,policy,steering,metric_mode,mean,stddev,braess")
        parse_fail(line_no, "unexpected CSV header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) parse_fail(line_no, "expected 9 fields");
    ReportRow r;
    auto fam = parse_family(f[0]);
    auto var = parse_variant(f[1]);
    auto pol = parse_policy(f[3]);
    auto met = parse_metric_mode(f[5]);
    auto mean = number<double>(f[6]);
    auto sd = number<double>(f[7]);
    if (!fam || !var || !pol || !met || !mean || !sd) parse_fail(line_no, "malformed field");
    r.family = *fam;
    r.variant = *var;
    try {
      r.regime = parse_regime(f[2]);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    r.policy = *pol;
    if (f[4] != "-") {
      auto s = number<double>(f[4]);
      if (!s) parse_fail(line_no, "bad steering");
      r.steering = *s;
    }
    r.metric = *met;
    r.mean = *mean;
    r.stddev = *sd;
    if (f[8] == "1") r.braess = true;
    else if (f[8] == "0") r.braess = false;
    else if (f[8] != "-") parse_fail(line_no, "bad braess flag");
    report.rows.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorKind::Parse, "empty report");
  return report;
}

}  // namespace coinroute
