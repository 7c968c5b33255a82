#include "coinroute/cost_function.hpp"

#include <cmath>
#include <sstream>

#include "coinroute/error.hpp"

namespace coinroute {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::Routing: return "routing";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::State: return "state";
  }
  return "unknown";
}

double CostFunction::operator()(double load) const {
  if (!(load >= 0.0) || !std::isfinite(load)) {
    std::ostringstream msg;
    msg << "cost function evaluated at invalid load " << load;
    throw Error(ErrorKind::Domain, msg.str());
  }
  double v = c0 + load * (c1 + load * (c2 + load * c3));
  if (clog != 0.0) v += clog * std::log1p(load);
  return v;
}

double CostFunction::derivative(double load) const {
  if (!(load >= 0.0) || !std::isfinite(load))
    throw Error(ErrorKind::Domain, "cost derivative evaluated at invalid load");
  return c1 + 2.0 * c2 * load + 3.0 * c3 * load * load + clog / (1.0 + load);
}

double eval_cost(const CostFunction& f, double load) { return f(load); }

std::string describe(const CostFunction& f) {
  if (f.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  auto term = [&](double coeff, const char* suffix) {
    if (coeff == 0.0) return;
    if (!first) out << " + ";
    first = false;
    if (*suffix == '\0') {
      out << coeff;
    } else {
      if (coeff != 1.0) out << coeff;
      out << suffix;
    }
  };
  term(f.c0, "");
  term(f.c1, "x");
  term(f.c2, "x^2");
  term(f.c3, "x^3");
  term(f.clog, "ln(1+x)");
  return out.str();
}

}  // namespace coinroute
