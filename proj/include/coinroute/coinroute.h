/* C interface of the coinroute simulator. Every function returns a
 * coin_status; on failure coin_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with coin_string_free. */
#ifndef COINROUTE_H
#define COINROUTE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef COINROUTE_BUILDING_LIBRARY
#    define COIN_API __declspec(dllexport)
#  else
#    define COIN_API __declspec(dllimport)
#  endif
#else
#  define COIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coin_status {
  COIN_OK = 0,
  COIN_ERR_DOMAIN = 1,
  COIN_ERR_CONFIG = 2,
  COIN_ERR_ROUTING = 3,
  COIN_ERR_PARSE = 4,
  COIN_ERR_IO = 5,
  COIN_ERR_STATE = 6,
  COIN_ERR_INVALID_ARGUMENT = 7,
  COIN_ERR_INTERNAL = 8
} coin_status;

typedef enum coin_policy { COIN_POLICY_ISPA = 0, COIN_POLICY_FK = 1, COIN_POLICY_MB = 2 } coin_policy;

typedef enum coin_metric {
  COIN_METRIC_FAMILY_DEFAULT = -1,
  COIN_METRIC_GLOBAL_PER_PACKET = 0,
  COIN_METRIC_SUM_OVER_SOURCES = 1
} coin_metric;

typedef enum coin_link { COIN_LINK_A = 0, COIN_LINK_B = 1, COIN_LINK_TIE = 2 } coin_link;

typedef struct coin_network coin_network;
typedef struct coin_experiment coin_experiment;
typedef struct coin_report coin_report;

/* V(x) = c0 + c1 x + c2 x^2 + c3 x^3 + clog ln(1+x) */
typedef struct coin_cost {
  double c0, c1, c2, c3, clog;
} coin_cost;

COIN_API const char* coin_version(void);
COIN_API const char* coin_status_name(coin_status status);
COIN_API const char* coin_last_error(void);
COIN_API void coin_string_free(char* s);

COIN_API coin_status coin_cost_eval(const coin_cost* f, double load, double* out);

/* ---- networks ---- */
COIN_API coin_status coin_network_benchmark(const char* family, const char* variant,
                                            const uint32_t* loads, size_t load_count,
                                            coin_network** out);
COIN_API coin_status coin_network_parse(const char* text, coin_network** out);
COIN_API coin_status coin_network_load(const char* path, coin_network** out);
COIN_API void coin_network_free(coin_network* net);
COIN_API coin_status coin_network_to_text(const coin_network* net, char** out);
/* One "category: message" line per violation; *valid is 1 when none. */
COIN_API coin_status coin_network_validate(const coin_network* net, int* valid, char** report);
/* One path per line, node ids separated by spaces. */
COIN_API coin_status coin_network_paths(const coin_network* net, const char* source,
                                        const char* destination, char** out);
COIN_API coin_status coin_network_wave_length(const coin_network* net, int* out);

/* ---- single runs ---- */
typedef struct coin_run_options {
  int window_waves;
  int warmup_waves;
  int measure_waves;
  uint64_t seed;
  coin_metric metric;
  coin_policy policy;
  double steering;
  int bootstrap_waves;
  const char* trace_path;         /* optional per-wave router CSV */
  const char* decision_log_path;  /* optional per-decision CSV */
} coin_run_options;

typedef struct coin_run_result {
  double mean;
  double spread;
  uint64_t store_size;
  int total_waves;
} coin_run_result;

COIN_API void coin_run_options_default(coin_run_options* opts);
COIN_API coin_status coin_run(const coin_network* net, const coin_run_options* opts,
                              coin_run_result* out);

/* ---- experiments ---- */
COIN_API coin_status coin_experiment_load(const char* path, coin_experiment** out);
COIN_API coin_status coin_experiment_parse(const char* text, coin_experiment** out);
COIN_API void coin_experiment_free(coin_experiment* exp);
COIN_API coin_status coin_experiment_set_threads(coin_experiment* exp, int threads);
COIN_API coin_status coin_experiment_output(const coin_experiment* exp, char** out);
COIN_API coin_status coin_experiment_epsilon(const coin_experiment* exp, double* out);
COIN_API coin_status coin_experiment_run(const coin_experiment* exp, coin_report** out);
COIN_API coin_status coin_steering_sweep(const coin_experiment* exp, const double* values,
                                         size_t count, coin_report** out);

COIN_API void coin_report_free(coin_report* report);
COIN_API coin_status coin_report_parse_csv(const char* text, coin_report** out);
COIN_API coin_status coin_report_csv(const coin_report* report, char** out);
COIN_API coin_status coin_report_row_count(const coin_report* report, size_t* out);
/* One "cell: message" line per failed cell. */
COIN_API coin_status coin_report_failures(const coin_report* report, size_t* count, char** text);
/* Plain-text paradox summary. */
COIN_API coin_status coin_report_braess(const coin_report* report, double epsilon, char** out);

/* ---- analysis ---- */
typedef struct coin_two_router {
  double alone;
  double both_shared_per_agent;
  double both_shared_total;
  double both_alt_per_agent;
  double both_alt_total;
} coin_two_router;

typedef struct coin_marginal {
  coin_link ispa;
  coin_link lb;
  double ispa_cost_a;
  double ispa_cost_b;
  double marginal_cost_b;
  int disagree;
} coin_marginal;

typedef struct coin_threshold_problem {
  coin_cost c_a;
  coin_cost c_b;
  int window;
} coin_threshold_problem;

typedef struct coin_bounds {
  double k, k_star, upper1, upper2, low1, low2, lb_lower, k_lb, k_opt;
} coin_bounds;

typedef struct coin_threshold_run {
  double average_cost;
  long long k_star;
  long long absorbed_at;
  int absorbed;
  int unit_increments;
  long long min_s_after;
  long long max_s_after;
  long long steps;
} coin_threshold_run;

COIN_API coin_status coin_two_router_game(const coin_cost* shared, const coin_cost* alt,
                                          coin_two_router* out);
COIN_API coin_status coin_marginal_decision(const coin_cost* v_a, const coin_cost* v_b, double y_b,
                                            coin_marginal* out);
/* costs must hold 3 entries; *count receives 2 (NetA) or 3 (NetB). */
COIN_API coin_status coin_hex_static_cost(const uint32_t* assignment, size_t paths,
                                          const char* variant, double* costs, size_t* count);
COIN_API coin_status coin_lb_threshold(const coin_threshold_problem* p, double* k_lb);
COIN_API coin_status coin_lb_bounds(const coin_threshold_problem* p, double k, coin_bounds* out);
COIN_API coin_status coin_lb_optimal_k(const coin_threshold_problem* p, double* k, double* upper2,
                                       int* unimodal);
COIN_API double coin_lb_optimal_k_closed_form(int window);
COIN_API coin_status coin_lb_simulate(const coin_threshold_problem* p, double k, long long steps,
                                      coin_threshold_run* out);

#ifdef __cplusplus
}
#endif

#endif /* COINROUTE_H */
