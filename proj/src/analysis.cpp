#include "coinroute/analysis.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "coinroute/error.hpp"

namespace coinroute {

TwoRouterOutcome two_router_game(const CostFunction& shared, const CostFunction& alt) {
  TwoRouterOutcome o;
  o.alone = shared(1.0);
  o.both_shared_per_agent = shared(2.0);
  o.both_shared_total = 2.0 * o.both_shared_per_agent;
  o.both_alt_per_agent = alt(1.0);
  o.both_alt_total = 2.0 * o.both_alt_per_agent;
  return o;
}

const char* to_string(LinkChoice c) {
  switch (c) {
    case LinkChoice::A: return "A";
    case LinkChoice::B: return "B";
    case LinkChoice::Tie: return "tie";
  }
  return "?";
}

namespace {

LinkChoice compare(double a, double b) {
  if (a < b) return LinkChoice::A;
  if (b < a) return LinkChoice::B;
  return LinkChoice::Tie;
}

long double eval(const CostFunction& f, long double x) {
  return f.c0 + f.c1 * x + f.c2 * x * x + f.c3 * x * x * x + f.clog * std::log1p(x);
}

}  // namespace

MarginalDecision marginal_decision_rule(const CostFunction& v_a, const CostFunction& v_b, double y_b) {
  if (!(y_b >= 0.0)) throw Error(ErrorKind::Domain, "y_B must be non-negative");
  MarginalDecision m;
  m.ispa_cost_a = v_a(1.0);
  m.ispa_cost_b = v_b(y_b + 1.0);
  m.marginal_cost_b = (y_b + 1.0) * v_b(y_b + 1.0) - y_b * v_b(y_b);
  m.ispa = compare(m.ispa_cost_a, m.ispa_cost_b);
  m.lb = compare(m.ispa_cost_a, m.marginal_cost_b);
  m.disagree = m.ispa != m.lb;
  return m;
}

std::vector<double> hex_static_cost(std::span<const std::uint32_t> assignment, Variant variant) {
  const std::size_t want = variant == Variant::NetA ? 2 : 3;
  if (assignment.size() != want)
    throw Error(ErrorKind::Config, "expected " + std::to_string(want) + " path loads, got " +
                                       std::to_string(assignment.size()));
  const double l = assignment[0], r = assignment[1], c = want == 3 ? assignment[2] : 0.0;
  const auto cheap = [](double x) { return 10.0 * x; };
  const auto expensive = [](double x) { return 50.0 + x; };
  const auto bridge = [](double x) { return 10.0 + x; };
  // left: cheap(l+c) then expensive(l); right: expensive(r) then cheap(r+c);
  // cross: cheap(l+c), bridge(c), cheap(r+c)
  std::vector<double> out{cheap(l + c) + expensive(l), expensive(r) + cheap(r + c)};
  if (want == 3) out.push_back(cheap(l + c) + bridge(c) + cheap(r + c));
  return out;
}

long double lb_threshold_solve(const ThresholdProblem& p) {
  const long double w = p.window;
  if (p.window < 3) throw Error(ErrorKind::Domain, "window must be at least 3");
  auto f = [&](long double k) { return eval(p.c_a, k / w) - eval(p.c_b, 1 - k / w); };
  long double lo = 1, hi = w - 1;
  long double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw Error(ErrorKind::Domain, "C_A(k/W) - C_B(1-k/W) does not change sign on [1, W-1]");
  for (int it = 0; it < 400; ++it) {
    const long double mid = (lo + hi) / 2;
    const long double fm = f(mid);
    if (std::fabs(fm) < 1e-12L || hi - lo < 1e-15L) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

namespace {

long double upper2_at(const ThresholdProblem& p, long double k) {
  const long double w = p.window;
  const long double a = (k + 1) / w;
  const long double b = 1 + 2 / w - (k + 1) / w;
  return a * eval(p.c_a, a) + b * eval(p.c_b, b);
}

long double low2_at(const ThresholdProblem& p, long double k) {
  const long double w = p.window;
  const long double a = (k - 1) / w;
  const long double b = 1 - 2 / w - (k - 1) / w;
  return a * eval(p.c_a, a) + b * eval(p.c_b, b);
}

}  // namespace

BoundsReport lb_bounds(const ThresholdProblem& p, long double k) {
  const long double w = p.window;
  if (!(k > 1 && k < w - 1)) throw Error(ErrorKind::Domain, "k must satisfy 1 < k < W-1");
  BoundsReport r;
  r.k = k;
  r.k_star = std::floor(k);
  const long double ks = r.k_star;
  r.upper1 = (ks + 1) / w * eval(p.c_a, (k + 1) / w) + (1 - ks / w) * eval(p.c_b, 1 - (k - 1) / w);
  r.upper2 = upper2_at(p, k);
  r.low1 = ks / w * eval(p.c_a, (k - 1) / w) + (1 - 1 / w - ks / w) * eval(p.c_b, 1 - (k + 1) / w);
  r.low2 = low2_at(p, k);
  r.k_lb = lb_threshold_solve(p);
  r.lb_lower = low2_at(p, r.k_lb);
  r.k_opt = lb_optimal_k(p).k;
  return r;
}

OptimalK lb_optimal_k(const ThresholdProblem& p) {
  const long double w = p.window;
  if (p.window < 4) throw Error(ErrorKind::Domain, "window must be at least 4");
  const long double lo = 1, hi = w - 1;
  // grid pre-scan: a unimodal function changes slope sign at most once
  const int n = 2000;
  std::vector<long double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = upper2_at(p, lo + (hi - lo) * i / n);
  int sign_changes = 0, best = 0;
  int prev = 0;
  for (int i = 1; i <= n; ++i) {
    if (g[i] < g[best]) best = i;
    const int s = g[i] > g[i - 1] ? 1 : (g[i] < g[i - 1] ? -1 : 0);
    if (s != 0) {
      if (prev != 0 && s != prev) ++sign_changes;
      prev = s;
    }
  }
  OptimalK out;
  if (sign_changes > 1) {
    const int m = 200000;
    long double bk = lo, bv = upper2_at(p, lo);
    for (int i = 1; i <= m; ++i) {
      const long double k = lo + (hi - lo) * i / m;
      const long double v = upper2_at(p, k);
      if (v < bv) {
        bv = v;
        bk = k;
      }
    }
    out.k = bk;
    out.upper2 = bv;
    out.unimodal = false;
    return out;
  }
  const long double phi = (std::sqrt(5.0L) - 1) / 2;
  long double a = lo, b = hi;
  long double c = b - phi * (b - a), d = a + phi * (b - a);
  long double fc = upper2_at(p, c), fd = upper2_at(p, d);
  while (b - a > 1e-9L) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = upper2_at(p, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = upper2_at(p, d);
    }
  }
  out.k = (a + b) / 2;
  out.upper2 = upper2_at(p, out.k);
  return out;
}

long double lb_optimal_k_closed_form(int window) {
  const long double w = window;
  return -1.0L / 3 - 1 / w + std::sqrt(28 + 48 / w) / 6;
}

ThresholdRun lb_simulate(const ThresholdProblem& p, long double k, long long steps) {
  const long long w = p.window;
  if (w < 1) throw Error(ErrorKind::Domain, "window must be positive");
  if (steps < 10 * w) throw Error(ErrorKind::Domain, "need at least 10*W steps");
  ThresholdRun run;
  run.steps = steps;
  std::deque<bool> window;  // true = A
  long long s = 0;
  long long prev_s = 0;
  bool prev_a = false, have_prev = false, switched = false;
  long double total = 0;
  long long measured = 0;
  for (long long t = 0; t < steps; ++t) {
    if (t > 0 && std::llabs(s - prev_s) > 1) run.unit_increments = false;
    const bool choose_a = static_cast<long double>(s) <= k;
    if (have_prev && prev_a && !choose_a && !switched) {
      switched = true;
      run.k_star = prev_s;
    }
    if (switched) {
      const bool inside = s == run.k_star || s == run.k_star + 1;
      if (run.absorbed_at < 0) {
        if (inside) {
          run.absorbed_at = t;
          run.absorbed = true;
        }
      } else if (!inside) {
        run.absorbed = false;
      }
    }
    const long double freq = static_cast<long double>(s) / w;
    const long double cost = choose_a ? eval(p.c_a, freq) : eval(p.c_b, 1 - freq);
    if (t >= 2 * w) {
      total += cost;
      ++measured;
      if (choose_a) ++run.a_count;
      if (measured == 1) run.min_s_after = run.max_s_after = s;
      run.min_s_after = std::min(run.min_s_after, s);
      run.max_s_after = std::max(run.max_s_after, s);
    }
    prev_s = s;
    prev_a = choose_a;
    have_prev = true;
    window.push_back(choose_a);
    if (choose_a) ++s;
    if (static_cast<long long>(window.size()) > w) {
      if (window.front()) --s;
      window.pop_front();
    }
  }
  run.average_cost = measured ? total / measured : 0;
  return run;
}

}  // namespace coinroute
