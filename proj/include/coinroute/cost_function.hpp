#pragma once

#include <string>

namespace coinroute {

/// Per-packet cost of traversing a router as a function of its windowed load:
///   V(x) = c0 + c1*x + c2*x^2 + c3*x^3 + clog*ln(1+x)
/// Every router family used by the benchmarks fits this form; dummy nodes,
/// sources and destinations use the zero function.
struct CostFunction {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double clog = 0.0;

  static CostFunction zero() { return {}; }
  static CostFunction constant(double c) { return {c, 0, 0, 0, 0}; }
  static CostFunction linear(double slope, double offset = 0.0) { return {offset, slope, 0, 0, 0}; }
  static CostFunction quadratic(double a) { return {0, 0, a, 0, 0}; }
  static CostFunction cubic(double a) { return {0, 0, 0, a, 0}; }
  static CostFunction log1p(double offset, double scale = 1.0) { return {offset, 0, 0, 0, scale}; }

  bool is_zero() const { return c0 == 0 && c1 == 0 && c2 == 0 && c3 == 0 && clog == 0; }
  bool is_monotone() const { return c0 >= 0 && c1 >= 0 && c2 >= 0 && c3 >= 0 && clog >= 0; }

  /// Throws Error(Domain) for negative or non-finite load.
  double operator()(double load) const;

  /// Derivative dV/dx at load.
  double derivative(double load) const;

  friend bool operator==(const CostFunction&, const CostFunction&) = default;
};

/// Named-operation form of CostFunction::operator().
double eval_cost(const CostFunction& f, double load);

/// Human-readable form, e.g. "50 + ln(1+x)".
std::string describe(const CostFunction& f);

}  // namespace coinroute
