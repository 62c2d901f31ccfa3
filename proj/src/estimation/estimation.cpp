#include "confed/estimation.hpp"

#include <cmath>
#include <limits>

namespace confed {

std::function<double(const Vec&)> parameter_l2loss(
    const ODEProblem& prob, const std::string& alg,
    const std::vector<double>& times, const std::vector<Vec>& data,
    const SolverOptions& base, Registry& reg) {
  if (times.empty())
    throw ShapeMismatch("parameter_l2loss needs at least one data time");
  if (data.size() != times.size())
    throw ShapeMismatch("data count does not match times count");
  for (const Vec& d : data)
    if (d.size() != prob.size())
      throw ShapeMismatch("data row length does not match problem dimension");

  // The solve only needs states at the data times.
  SolverOptions opts = base;
  opts.saveat = times;
  opts.save_everystep = false;
  opts.dense = false;
  opts.validate();  // bad times (unsorted, non-finite) fail here, not per poll
  for (double tv : times)
    if (tv < prob.tspan.first || tv > prob.tspan.second)
      throw OutOfRange("data time outside the problem tspan");

  return [prob, alg, times, data, opts, &reg](const Vec& p) -> double {
    constexpr double inf = std::numeric_limits<double>::infinity();
    try {
      RemakeOverrides over;
      over.p = p;
      const ODEProblem cand = remake(prob, over);
      const Solution sol = solve(cand, alg, opts, reg);
      if (!sol.success()) return inf;
      double acc = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const Vec& ui = sol.u[i];
        for (std::size_t j = 0; j < ui.size(); ++j) {
          const double r = ui[j] - data[i][j];
          acc += r * r;
        }
      }
      return std::isfinite(acc) ? acc : inf;
    } catch (const Error&) {
      return inf;  // bad candidate (wrong p length, solver misuse): poll-safe
    }
  };
}

}  // namespace confed
