// coinroute command-line front end. Talks to the simulator only through the
// C API in coinroute.h.
#include <coinroute/coinroute.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Failure {
  coin_status status;
};

void check(coin_status s) {
  if (s != COIN_OK) {
    std::cerr << "error (" << coin_status_name(s) << "): " << coin_last_error() << "\n";
    throw Failure{s};
  }
}

std::string take(char* s) {
  std::string out = s ? s : "";
  coin_string_free(s);
  return out;
}

using NetworkPtr = std::unique_ptr<coin_network, decltype(&coin_network_free)>;
using ExperimentPtr = std::unique_ptr<coin_experiment, decltype(&coin_experiment_free)>;
using ReportPtr = std::unique_ptr<coin_report, decltype(&coin_report_free)>;

ExperimentPtr load_experiment(const std::string& path, int threads) {
  coin_experiment* e = nullptr;
  check(coin_experiment_load(path.c_str(), &e));
  ExperimentPtr exp(e, coin_experiment_free);
  if (threads > 0) check(coin_experiment_set_threads(exp.get(), threads));
  return exp;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error (io): cannot write '" << path << "'\n";
    throw Failure{COIN_ERR_IO};
  }
  out << text;
}

int report_failures(const coin_report* r) {
  size_t n = 0;
  char* text = nullptr;
  check(coin_report_failures(r, &n, &text));
  const auto s = take(text);
  if (n) std::cerr << n << " cell(s) failed:\n" << s;
  return n ? 3 : 0;
}

NetworkPtr open_network(const std::string& file, const std::string& family, const std::string& variant,
                        const std::vector<uint32_t>& loads) {
  coin_network* n = nullptr;
  if (!file.empty()) check(coin_network_load(file.c_str(), &n));
  else check(coin_network_benchmark(family.c_str(), variant.c_str(), loads.data(), loads.size(), &n));
  return NetworkPtr(n, coin_network_free);
}

coin_cost parse_cost(const std::string& text) {
  coin_cost c{0, 0, 0, 0, 0};
  std::istringstream in(text);
  std::string tok;
  double* f[] = {&c.c0, &c.c1, &c.c2, &c.c3, &c.clog};
  int i = 0;
  while (std::getline(in, tok, ',')) {
    if (i == 5) throw CLI::ValidationError("cost", "at most five coefficients c0,c1,c2,c3,clog");
    *f[i++] = std::stod(tok);
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-based network routing simulator: ISPA, FK COIN and MB COIN"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads for experiments (0: all cores)");

  std::string config_path, out_path;

  auto* simulate = app.add_subcommand("simulate", "Run an experiment file and write the result CSV");
  simulate->add_option("config", config_path, "Experiment file")->required()->check(CLI::ExistingFile);
  simulate->add_option("-o,--output", out_path, "CSV destination (default: file's output key, else stdout)");

  auto* braess = app.add_subcommand("braess", "Run an experiment file and summarize Braess paradoxes");
  braess->add_option("config", config_path, "Experiment file")->required()->check(CLI::ExistingFile);
  double epsilon = -1.0;
  braess->add_option("--epsilon", epsilon, "Relative margin for a paradox (default: from the file)");

  auto* sweep = app.add_subcommand("sweep", "Run MB COIN over a list of steering values");
  sweep->add_option("config", config_path, "Experiment file")->required()->check(CLI::ExistingFile);
  std::vector<double> steering{0.0, 0.25, 0.5, 0.75, 1.0};
  sweep->add_option("--steering", steering, "Steering values")->delimiter(',')->check(CLI::Range(0.0, 1.0));
  sweep->add_option("-o,--output", out_path, "CSV destination (default: stdout)");

  auto* run = app.add_subcommand("run", "Single run with optional trace and decision log");
  std::string family = "Hex", variant = "NetA", net_file, policy = "ISPA", metric = "global-per-packet";
  std::vector<uint32_t> loads{1};
  coin_run_options opts;
  coin_run_options_default(&opts);
  std::string trace_path, log_path;
  run->add_option("--family", family, "Benchmark family");
  run->add_option("--variant", variant, "NetA or NetB");
  run->add_option("--loads", loads, "Packets per wave per source")->delimiter(',');
  run->add_option("--network", net_file, "Network text file instead of a benchmark");
  run->add_option("--policy", policy, "ISPA, FK or MB")->check(CLI::IsMember({"ISPA", "FK", "MB"}));
  run->add_option("--steering", opts.steering, "MB steering probability")->check(CLI::Range(0.0, 1.0));
  run->add_option("--bootstrap", opts.bootstrap_waves, "MB bootstrap waves");
  run->add_option("--window", opts.window_waves, "Window length in waves");
  run->add_option("--warmup", opts.warmup_waves, "Warm-up waves");
  run->add_option("--measure", opts.measure_waves, "Measured waves");
  run->add_option("--seed", opts.seed, "Seed");
  run->add_option("--metric", metric, "global-per-packet or sum-over-sources")
      ->check(CLI::IsMember({"global-per-packet", "sum-over-sources"}));
  run->add_option("--trace", trace_path, "Per-wave router CSV");
  run->add_option("--decisions", log_path, "Per-decision CSV");

  auto* show = app.add_subcommand("show", "Print a network in text form");
  show->add_option("--family", family, "Benchmark family");
  show->add_option("--variant", variant, "NetA or NetB");
  show->add_option("--loads", loads, "Packets per wave per source")->delimiter(',');
  show->add_option("--network", net_file, "Network text file");
  std::string path_from, path_to;
  show->add_option("--paths", path_from, "List every path from this node")->needs(
      show->add_option("--to", path_to, "Destination for --paths"));

  auto* validate = app.add_subcommand("validate", "Check a network file");
  validate->add_option("network", net_file, "Network text file")->required()->check(CLI::ExistingFile);

  auto* analyze = app.add_subcommand("analyze", "Closed-form analyses");
  analyze->require_subcommand(1);
  auto* lb = analyze->add_subcommand("lb", "Threshold-policy bounds certificate");
  int window = 1000;
  std::string c_a = "0,0,1", c_b = "0,1";
  long long steps = 0;
  lb->add_option("--window", window, "Window length W");
  lb->add_option("--ca", c_a, "C_A coefficients c0,c1,c2,c3,clog");
  lb->add_option("--cb", c_b, "C_B coefficients c0,c1,c2,c3,clog");
  lb->add_option("--simulate", steps, "Also simulate this many steps at k_LB and k'");
  auto* hex = analyze->add_subcommand("hex-static", "Static highway costs");
  std::vector<uint32_t> assign;
  hex->add_option("--assign", assign, "Travelers per path: left,right[,cross]")->delimiter(',');
  auto* two = analyze->add_subcommand("two-router", "Shared-link game");
  std::string shared = "0,0,0,1", alt = "0,2";
  two->add_option("--shared", shared, "Shared link coefficients");
  two->add_option("--alt", alt, "Alternative link coefficients");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      auto exp = load_experiment(config_path, threads);
      coin_report* r = nullptr;
      check(coin_experiment_run(exp.get(), &r));
      ReportPtr rep(r, coin_report_free);
      char* csv = nullptr;
      check(coin_report_csv(rep.get(), &csv));
      std::string dest = out_path;
      if (dest.empty()) {
        char* o = nullptr;
        check(coin_experiment_output(exp.get(), &o));
        dest = take(o);
      }
      emit(take(csv), dest);
      return report_failures(rep.get());
    }
    if (braess->parsed()) {
      auto exp = load_experiment(config_path, threads);
      if (epsilon < 0) check(coin_experiment_epsilon(exp.get(), &epsilon));
      coin_report* r = nullptr;
      check(coin_experiment_run(exp.get(), &r));
      ReportPtr rep(r, coin_report_free);
      char* text = nullptr;
      check(coin_report_braess(rep.get(), epsilon, &text));
      std::cout << take(text);
      return report_failures(rep.get());
    }
    if (sweep->parsed()) {
      auto exp = load_experiment(config_path, threads);
      coin_report* r = nullptr;
      check(coin_steering_sweep(exp.get(), steering.data(), steering.size(), &r));
      ReportPtr rep(r, coin_report_free);
      char* csv = nullptr;
      check(coin_report_csv(rep.get(), &csv));
      emit(take(csv), out_path);
      return report_failures(rep.get());
    }
    if (run->parsed()) {
      auto net = open_network(net_file, family, variant, loads);
      opts.policy = policy == "ISPA" ? COIN_POLICY_ISPA : policy == "FK" ? COIN_POLICY_FK : COIN_POLICY_MB;
      if (run->count("--metric") == 0 && net_file.empty() &&
          (family == "Butterfly" || family == "Ray"))
        metric = "sum-over-sources";
      opts.metric = metric == "sum-over-sources" ? COIN_METRIC_SUM_OVER_SOURCES : COIN_METRIC_GLOBAL_PER_PACKET;
      opts.trace_path = trace_path.empty() ? nullptr : trace_path.c_str();
      opts.decision_log_path = log_path.empty() ? nullptr : log_path.c_str();
      coin_run_result res{};
      check(coin_run(net.get(), &opts, &res));
      std::printf("policy=%s metric=%s mean=%.6f spread=%.6f waves=%d store=%llu\n", policy.c_str(),
                  metric.c_str(), res.mean, res.spread, res.total_waves,
                  static_cast<unsigned long long>(res.store_size));
      return 0;
    }
    if (show->parsed()) {
      auto net = open_network(net_file, family, variant, loads);
      char* text = nullptr;
      if (!path_from.empty()) check(coin_network_paths(net.get(), path_from.c_str(), path_to.c_str(), &text));
      else check(coin_network_to_text(net.get(), &text));
      std::cout << take(text);
      return 0;
    }
    if (validate->parsed()) {
      auto net = open_network(net_file, "", "", {});
      int ok = 0;
      char* text = nullptr;
      check(coin_network_validate(net.get(), &ok, &text));
      const auto report = take(text);
      if (ok) {
        int len = 0;
        check(coin_network_wave_length(net.get(), &len));
        std::cout << "valid, wave length " << len << "\n";
        return 0;
      }
      std::cout << report;
      return 1;
    }
    if (lb->parsed()) {
      coin_threshold_problem p{parse_cost(c_a), parse_cost(c_b), window};
      double k_lb = 0, k_opt = 0, up = 0;
      int unimodal = 1;
      check(coin_lb_threshold(&p, &k_lb));
      check(coin_lb_optimal_k(&p, &k_opt, &up, &unimodal));
      coin_bounds at_lb{}, at_opt{};
      check(coin_lb_bounds(&p, k_lb, &at_lb));
      check(coin_lb_bounds(&p, k_opt, &at_opt));
      std::printf("W = %d\n", window);
      std::printf("k_LB/W            = %.6f\n", k_lb / window);
      std::printf("lb_lower(k_LB)    = %.6f\n", at_lb.lb_lower);
      std::printf("k'/W              = %.6f%s\n", k_opt / window, unimodal ? "" : " (dense-grid fallback)");
      std::printf("upper2(k')        = %.6f\n", at_opt.upper2);
      std::printf("closed-form k'/W  = %.6f (C_A = x^2, C_B = x only)\n", coin_lb_optimal_k_closed_form(window));
      const bool cert = at_lb.lb_lower > at_opt.upper2;
      std::printf("certificate: %.3f %s %.3f -> %s\n", at_lb.lb_lower, cert ? ">" : "<=", at_opt.upper2,
                  cert ? "load balancing is not optimal" : "no certificate");
      if (steps > 0) {
        for (double k : {k_lb, k_opt}) {
          coin_threshold_run r{};
          check(coin_lb_simulate(&p, k, steps, &r));
          std::printf("simulate k/W=%.4f: average=%.6f k*=%lld absorbed=%s unit-steps=%s\n", k / window,
                      r.average_cost, r.k_star, r.absorbed ? "yes" : "no", r.unit_increments ? "yes" : "no");
        }
      }
      return 0;
    }
    if (hex->parsed()) {
      std::vector<std::vector<uint32_t>> cases;
      if (assign.empty()) cases = {{1, 0}, {3, 3}, {2, 2, 2}, {0, 0, 1}};
      else cases = {assign};
      for (const auto& a : cases) {
        double costs[3];
        size_t n = 0;
        check(coin_hex_static_cost(a.data(), a.size(), a.size() == 2 ? "NetA" : "NetB", costs, &n));
        std::printf("%s (", a.size() == 2 ? "NetA" : "NetB");
        for (size_t i = 0; i < a.size(); ++i) std::printf("%s%u", i ? "," : "", a[i]);
        std::printf("):");
        for (size_t i = 0; i < n; ++i) std::printf(" %s=%g", i == 0 ? "left" : i == 1 ? "right" : "cross", costs[i]);
        std::printf("\n");
      }
      return 0;
    }
    if (two->parsed()) {
      const coin_cost s = parse_cost(shared), a = parse_cost(alt);
      coin_two_router o{};
      check(coin_two_router_game(&s, &a, &o));
      std::printf("alone on shared:        %g\n", o.alone);
      std::printf("both on shared:         %g each (%g total)\n", o.both_shared_per_agent, o.both_shared_total);
      std::printf("both on alternatives:   %g each (%g total)\n", o.both_alt_per_agent, o.both_alt_total);
      return 0;
    }
  } catch (const Failure& f) {
    return static_cast<int>(f.status) == 0 ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
