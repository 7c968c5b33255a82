#include "coinroute/coinroute.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "coinroute/analysis.hpp"
#include "coinroute/benchmarks.hpp"
#include "coinroute/error.hpp"
#include "coinroute/harness.hpp"
#include "coinroute/network.hpp"
#include "coinroute/routing.hpp"
#include "coinroute/wlr.hpp"

struct coin_network {
  coinroute::NetworkSpec spec;
  std::optional<coinroute::CompiledNetwork> compiled;
};

struct coin_experiment {
  coinroute::ExperimentConfig config;
};

struct coin_report {
  coinroute::ExperimentReport report;
};

namespace {

thread_local std::string last_error;

coin_status fail(coin_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

coin_status map_kind(coinroute::ErrorKind k) {
  using coinroute::ErrorKind;
  switch (k) {
    case ErrorKind::Domain: return COIN_ERR_DOMAIN;
    case ErrorKind::Config: return COIN_ERR_CONFIG;
    case ErrorKind::Routing: return COIN_ERR_ROUTING;
    case ErrorKind::Parse: return COIN_ERR_PARSE;
    case ErrorKind::Io: return COIN_ERR_IO;
    case ErrorKind::State: return COIN_ERR_STATE;
  }
  return COIN_ERR_INTERNAL;
}

template <class F>
coin_status guard(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const coinroute::Error& e) {
    return fail(map_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(COIN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COIN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(COIN_ERR_INTERNAL, "unknown error");
  }
}

#define COIN_REQUIRE(cond, what) \
  if (!(cond)) return fail(COIN_ERR_INVALID_ARGUMENT, what)

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

coinroute::CostFunction to_cost(const coin_cost& c) { return {c.c0, c.c1, c.c2, c.c3, c.clog}; }

coinroute::ThresholdProblem to_problem(const coin_threshold_problem& p) {
  return {to_cost(p.c_a), to_cost(p.c_b), p.window};
}

const coinroute::CompiledNetwork& compiled(const coin_network* net) {
  auto* n = const_cast<coin_network*>(net);
  if (!n->compiled) n->compiled.emplace(n->spec);
  return *n->compiled;
}

coin_status wrap_network(coinroute::NetworkSpec spec, coin_network** out) {
  auto n = std::make_unique<coin_network>();
  n->spec = std::move(spec);
  *out = n.release();
  return COIN_OK;
}

}  // namespace

extern "C" {

const char* coin_version(void) { return "0.1.0"; }

const char* coin_status_name(coin_status status) {
  switch (status) {
    case COIN_OK: return "ok";
    case COIN_ERR_DOMAIN: return "domain";
    case COIN_ERR_CONFIG: return "config";
    case COIN_ERR_ROUTING: return "routing";
    case COIN_ERR_PARSE: return "parse";
    case COIN_ERR_IO: return "io";
    case COIN_ERR_STATE: return "state";
    case COIN_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case COIN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* coin_last_error(void) { return last_error.c_str(); }

void coin_string_free(char* s) { std::free(s); }

coin_status coin_cost_eval(const coin_cost* f, double load, double* out) {
  COIN_REQUIRE(f && out, "null argument");
  return guard([&] {
    *out = coinroute::eval_cost(to_cost(*f), load);
    return COIN_OK;
  });
}

coin_status coin_network_benchmark(const char* family, const char* variant, const uint32_t* loads,
                                   size_t load_count, coin_network** out) {
  COIN_REQUIRE(family && variant && out && (loads || load_count == 0), "null argument");
  return guard([&] {
    auto fam = coinroute::parse_family(family);
    if (!fam) return fail(COIN_ERR_CONFIG, std::string("unknown benchmark family '") + family + "'");
    auto var = coinroute::parse_variant(variant);
    if (!var) return fail(COIN_ERR_CONFIG, std::string("unknown variant '") + variant + "'");
    return wrap_network(coinroute::build_benchmark({*fam, *var}, {loads, load_count}), out);
  });
}

coin_status coin_network_parse(const char* text, coin_network** out) {
  COIN_REQUIRE(text && out, "null argument");
  return guard([&] { return wrap_network(coinroute::parse_network(text), out); });
}

coin_status coin_network_load(const char* path, coin_network** out) {
  COIN_REQUIRE(path && out, "null argument");
  return guard([&] { return wrap_network(coinroute::load_network(path), out); });
}

void coin_network_free(coin_network* net) { delete net; }

coin_status coin_network_to_text(const coin_network* net, char** out) {
  COIN_REQUIRE(net && out, "null argument");
  return guard([&] {
    *out = dup_string(coinroute::to_text(net->spec));
    return COIN_OK;
  });
}

coin_status coin_network_validate(const coin_network* net, int* valid, char** report) {
  COIN_REQUIRE(net && valid, "null argument");
  return guard([&] {
    const auto r = coinroute::validate_network(net->spec);
    *valid = r.valid() ? 1 : 0;
    if (report) {
      std::string text;
      for (const auto& v : r.violations) text += v.category + ": " + v.message + "\n";
      *report = dup_string(text);
    }
    return COIN_OK;
  });
}

coin_status coin_network_paths(const coin_network* net, const char* source, const char* destination,
                               char** out) {
  COIN_REQUIRE(net && source && destination && out, "null argument");
  return guard([&] {
    std::string text;
    for (const auto& p : coinroute::enumerate_paths(net->spec, source, destination)) {
      for (std::size_t i = 0; i < p.size(); ++i) text += (i ? " " : "") + p[i];
      text += '\n';
    }
    *out = dup_string(text);
    return COIN_OK;
  });
}

coin_status coin_network_wave_length(const coin_network* net, int* out) {
  COIN_REQUIRE(net && out, "null argument");
  return guard([&] {
    *out = compiled(net).wave_length();
    return COIN_OK;
  });
}

void coin_run_options_default(coin_run_options* opts) {
  if (!opts) return;
  const coinroute::SimConfig sim;
  const coinroute::PolicyConfig pol;
  opts->window_waves = sim.window_waves;
  opts->warmup_waves = sim.warmup_waves;
  opts->measure_waves = sim.measure_waves;
  opts->seed = sim.seed;
  opts->metric = COIN_METRIC_GLOBAL_PER_PACKET;
  opts->policy = COIN_POLICY_ISPA;
  opts->steering = pol.steering;
  opts->bootstrap_waves = pol.bootstrap_waves;
  opts->trace_path = nullptr;
  opts->decision_log_path = nullptr;
}

coin_status coin_run(const coin_network* net, const coin_run_options* opts, coin_run_result* out) {
  COIN_REQUIRE(net && opts && out, "null argument");
  COIN_REQUIRE(opts->policy >= COIN_POLICY_ISPA && opts->policy <= COIN_POLICY_MB, "unknown policy");
  COIN_REQUIRE(opts->metric >= COIN_METRIC_GLOBAL_PER_PACKET && opts->metric <= COIN_METRIC_SUM_OVER_SOURCES,
               "metric must be global-per-packet or sum-over-sources for a single run");
  return guard([&] {
    const auto& cn = compiled(net);
    coinroute::SimConfig sim;
    sim.window_waves = opts->window_waves;
    sim.warmup_waves = opts->warmup_waves;
    sim.measure_waves = opts->measure_waves;
    sim.seed = opts->seed;
    sim.metric_mode = opts->metric == COIN_METRIC_SUM_OVER_SOURCES
                          ? coinroute::MetricMode::SumOverSources
                          : coinroute::MetricMode::GlobalPerPacket;
    coinroute::PolicyConfig pol;
    pol.policy = static_cast<coinroute::Policy>(opts->policy);
    pol.steering = opts->steering;
    pol.bootstrap_waves = opts->bootstrap_waves;

    std::ofstream trace_file, log_file;
    std::optional<coinroute::TraceWriter> trace;
    std::optional<coinroute::DecisionLogWriter> log;
    if (opts->trace_path) {
      trace_file.open(opts->trace_path);
      if (!trace_file) return fail(COIN_ERR_IO, std::string("cannot write '") + opts->trace_path + "'");
      trace.emplace(trace_file);
    }
    if (opts->decision_log_path) {
      log_file.open(opts->decision_log_path);
      if (!log_file)
        return fail(COIN_ERR_IO, std::string("cannot write '") + opts->decision_log_path + "'");
      log.emplace(log_file, cn);
    }
    coinroute::RunHooks hooks;
    if (trace) hooks.on_wave = [&](const coinroute::WaveState& s, const coinroute::WaveMetrics&, bool) {
      trace->write(cn, s);
    };
    if (log) hooks.on_decision = [&](const coinroute::DecisionEvent& e) { log->write(e); };
    const auto r = coinroute::run_policy(cn, sim, pol, hooks);
    out->mean = r.cell.mean;
    out->spread = r.cell.spread;
    out->store_size = r.store_size;
    out->total_waves = r.total_waves;
    return COIN_OK;
  });
}

coin_status coin_experiment_load(const char* path, coin_experiment** out) {
  COIN_REQUIRE(path && out, "null argument");
  return guard([&] {
    *out = new coin_experiment{coinroute::load_experiment(path)};
    return COIN_OK;
  });
}

coin_status coin_experiment_parse(const char* text, coin_experiment** out) {
  COIN_REQUIRE(text && out, "null argument");
  return guard([&] {
    *out = new coin_experiment{coinroute::parse_experiment(text)};
    return COIN_OK;
  });
}

void coin_experiment_free(coin_experiment* exp) { delete exp; }

coin_status coin_experiment_set_threads(coin_experiment* exp, int threads) {
  COIN_REQUIRE(exp && threads >= 0, "invalid argument");
  exp->config.threads = threads;
  return COIN_OK;
}

coin_status coin_experiment_output(const coin_experiment* exp, char** out) {
  COIN_REQUIRE(exp && out, "null argument");
  return guard([&] {
    *out = dup_string(exp->config.output);
    return COIN_OK;
  });
}

coin_status coin_experiment_epsilon(const coin_experiment* exp, double* out) {
  COIN_REQUIRE(exp && out, "null argument");
  *out = exp->config.epsilon;
  return COIN_OK;
}

coin_status coin_experiment_run(const coin_experiment* exp, coin_report** out) {
  COIN_REQUIRE(exp && out, "null argument");
  return guard([&] {
    *out = new coin_report{coinroute::run_experiment(exp->config)};
    return COIN_OK;
  });
}

coin_status coin_steering_sweep(const coin_experiment* exp, const double* values, size_t count,
                                coin_report** out) {
  COIN_REQUIRE(exp && out && (values || count == 0), "null argument");
  return guard([&] {
    *out = new coin_report{coinroute::steering_sweep(exp->config, std::vector<double>(values, values + count))};
    return COIN_OK;
  });
}

void coin_report_free(coin_report* report) { delete report; }

coin_status coin_report_parse_csv(const char* text, coin_report** out) {
  COIN_REQUIRE(text && out, "null argument");
  return guard([&] {
    *out = new coin_report{coinroute::parse_report_csv(text)};
    return COIN_OK;
  });
}

coin_status coin_report_csv(const coin_report* report, char** out) {
  COIN_REQUIRE(report && out, "null argument");
  return guard([&] {
    *out = dup_string(coinroute::report_to_csv(report->report));
    return COIN_OK;
  });
}

coin_status coin_report_row_count(const coin_report* report, size_t* out) {
  COIN_REQUIRE(report && out, "null argument");
  *out = report->report.rows.size();
  return COIN_OK;
}

coin_status coin_report_failures(const coin_report* report, size_t* count, char** text) {
  COIN_REQUIRE(report && count, "null argument");
  return guard([&] {
    *count = report->report.failures.size();
    if (text) {
      std::string s;
      for (const auto& f : report->report.failures) s += f.cell + ": " + f.message + "\n";
      *text = dup_string(s);
    }
    return COIN_OK;
  });
}

coin_status coin_report_braess(const coin_report* report, double epsilon, char** out) {
  COIN_REQUIRE(report && out, "null argument");
  return guard([&] {
    const auto s = coinroute::braess_check(report->report, epsilon);
    std::ostringstream o;
    o << "family,regime,policy,steering,net_a,net_b,paradox\n";
    for (const auto& e : s.entries) {
      o << coinroute::to_string(e.family) << ',' << coinroute::format_regime(e.regime) << ','
        << coinroute::to_string(e.policy) << ',';
      if (e.steering) o << *e.steering;
      else o << '-';
      o << ',' << e.net_a << ',' << e.net_b << ',' << (e.paradox ? "yes" : "no") << '\n';
    }
    o << "# paradox count per policy:";
    for (const auto& [policy, n] : s.paradox_count) o << ' ' << policy << '=' << n;
    o << '\n';
    for (const auto& n : s.notes) o << "# " << n << '\n';
    *out = dup_string(o.str());
    return COIN_OK;
  });
}

coin_status coin_two_router_game(const coin_cost* shared, const coin_cost* alt, coin_two_router* out) {
  COIN_REQUIRE(shared && alt && out, "null argument");
  return guard([&] {
    const auto o = coinroute::two_router_game(to_cost(*shared), to_cost(*alt));
    *out = {o.alone, o.both_shared_per_agent, o.both_shared_total, o.both_alt_per_agent, o.both_alt_total};
    return COIN_OK;
  });
}

coin_status coin_marginal_decision(const coin_cost* v_a, const coin_cost* v_b, double y_b,
                                   coin_marginal* out) {
  COIN_REQUIRE(v_a && v_b && out, "null argument");
  return guard([&] {
    const auto m = coinroute::marginal_decision_rule(to_cost(*v_a), to_cost(*v_b), y_b);
    out->ispa = static_cast<coin_link>(m.ispa);
    out->lb = static_cast<coin_link>(m.lb);
    out->ispa_cost_a = m.ispa_cost_a;
    out->ispa_cost_b = m.ispa_cost_b;
    out->marginal_cost_b = m.marginal_cost_b;
    out->disagree = m.disagree ? 1 : 0;
    return COIN_OK;
  });
}

coin_status coin_hex_static_cost(const uint32_t* assignment, size_t paths, const char* variant,
                                 double* costs, size_t* count) {
  COIN_REQUIRE(assignment && variant && costs && count, "null argument");
  return guard([&] {
    auto var = coinroute::parse_variant(variant);
    if (!var) return fail(COIN_ERR_CONFIG, std::string("unknown variant '") + variant + "'");
    const auto c = coinroute::hex_static_cost({assignment, paths}, *var);
    std::copy(c.begin(), c.end(), costs);
    *count = c.size();
    return COIN_OK;
  });
}

coin_status coin_lb_threshold(const coin_threshold_problem* p, double* k_lb) {
  COIN_REQUIRE(p && k_lb, "null argument");
  return guard([&] {
    *k_lb = static_cast<double>(coinroute::lb_threshold_solve(to_problem(*p)));
    return COIN_OK;
  });
}

coin_status coin_lb_bounds(const coin_threshold_problem* p, double k, coin_bounds* out) {
  COIN_REQUIRE(p && out, "null argument");
  return guard([&] {
    const auto b = coinroute::lb_bounds(to_problem(*p), k);
    *out = {static_cast<double>(b.k),      static_cast<double>(b.k_star), static_cast<double>(b.upper1),
            static_cast<double>(b.upper2), static_cast<double>(b.low1),   static_cast<double>(b.low2),
            static_cast<double>(b.lb_lower), static_cast<double>(b.k_lb), static_cast<double>(b.k_opt)};
    return COIN_OK;
  });
}

coin_status coin_lb_optimal_k(const coin_threshold_problem* p, double* k, double* upper2, int* unimodal) {
  COIN_REQUIRE(p && k, "null argument");
  return guard([&] {
    const auto o = coinroute::lb_optimal_k(to_problem(*p));
    *k = static_cast<double>(o.k);
    if (upper2) *upper2 = static_cast<double>(o.upper2);
    if (unimodal) *unimodal = o.unimodal ? 1 : 0;
    return COIN_OK;
  });
}

double coin_lb_optimal_k_closed_form(int window) {
  return static_cast<double>(coinroute::lb_optimal_k_closed_form(window));
}

coin_status coin_lb_simulate(const coin_threshold_problem* p, double k, long long steps,
                             coin_threshold_run* out) {
  COIN_REQUIRE(p && out, "null argument");
  return guard([&] {
    const auto r = coinroute::lb_simulate(to_problem(*p), k, steps);
    out->average_cost = static_cast<double>(r.average_cost);
    out->k_star = r.k_star;
    out->absorbed_at = r.absorbed_at;
    out->absorbed = r.absorbed ? 1 : 0;
    out->unit_increments = r.unit_increments ? 1 : 0;
    out->min_s_after = r.min_s_after;
    out->max_s_after = r.max_s_after;
    out->steps = r.steps;
    return COIN_OK;
  });
}

}  // extern "C"
