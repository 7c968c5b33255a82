#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coinroute/benchmarks.hpp"
#include "coinroute/cost_function.hpp"

namespace coinroute {

/// Two routers with one packet each; a shared link versus a private
/// alternative per router.
struct TwoRouterOutcome {
  double alone = 0.0;                  // one packet alone on the shared link
  double both_shared_per_agent = 0.0;  // shared(2)
  double both_shared_total = 0.0;
  double both_alt_per_agent = 0.0;     // alt(1)
  double both_alt_total = 0.0;
};

TwoRouterOutcome two_router_game(const CostFunction& shared, const CostFunction& alt);

enum class LinkChoice { A, B, Tie };
const char* to_string(LinkChoice c);

/// One packet at a node whose link B already carries y_B packets.
struct MarginalDecision {
  LinkChoice ispa = LinkChoice::Tie;  // V_A(1) against V_B(y_B + 1)
  LinkChoice lb = LinkChoice::Tie;    // V_A(1) against (y_B+1)V_B(y_B+1) - y_B V_B(y_B)
  double ispa_cost_a = 0.0;
  double ispa_cost_b = 0.0;
  double marginal_cost_b = 0.0;
  bool disagree = false;
};

/// Throws Error(Domain) for y_B < 0.
MarginalDecision marginal_decision_rule(const CostFunction& v_a, const CostFunction& v_b, double y_b);

/// Per-traveler cost of each highway path with loads summed over shared
/// segments. Net A has paths (left, right); Net B adds the cross path.
/// Throws Error(Config) for the wrong number of paths.
std::vector<double> hex_static_cost(std::span<const std::uint32_t> assignment, Variant variant);

/// Single router choosing between links A and B with a W-step window;
/// costs take the link's frequency in [0,1].
struct ThresholdProblem {
  CostFunction c_a;
  CostFunction c_b;
  int window = 1000;
};

struct BoundsReport {
  long double k = 0;
  long double k_star = 0;
  long double upper1 = 0;
  long double upper2 = 0;
  long double low1 = 0;
  long double low2 = 0;
  long double lb_lower = 0;  // lower bound evaluated at k_lb
  long double k_lb = 0;
  long double k_opt = 0;
};

/// Threshold k_LB with C_A(k/W) = C_B(1 - k/W), by bisection on [1, W-1].
/// Throws Error(Domain) when the difference does not change sign.
long double lb_threshold_solve(const ThresholdProblem& p);

/// Throws Error(Domain) unless 1 < k < W-1.
BoundsReport lb_bounds(const ThresholdProblem& p, long double k);

struct OptimalK {
  long double k = 0;
  long double upper2 = 0;
  bool unimodal = true;  // false when the dense-grid fallback was used
};

/// Minimizer k' of the upper2 bound over (1, W-1).
OptimalK lb_optimal_k(const ThresholdProblem& p);

/// k'/W for C_A = x^2, C_B = x.
long double lb_optimal_k_closed_form(int window);

struct ThresholdRun {
  long double average_cost = 0;  // over steps after 2W
  long long k_star = 0;          // S value before the first A-to-B switch
  long long absorbed_at = -1;    // first step with S in {k*, k*+1}; -1 if never
  bool absorbed = false;         // reached and never left {k*, k*+1}
  bool unit_increments = true;   // |S(t+1) - S(t)| <= 1 at every step
  long long min_s_after = 0;
  long long max_s_after = 0;
  long long steps = 0;
  long long a_count = 0;          // A choices in the measured steps
};

/// Simulates s(t) = A iff S(t) <= k with a W-step window of past choices.
/// Throws Error(Domain) for T < 10W.
ThresholdRun lb_simulate(const ThresholdProblem& p, long double k, long long steps);

}  // namespace coinroute
