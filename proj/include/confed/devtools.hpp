#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confed/registry.hpp"
#include "confed/solve.hpp"

namespace confed::devtools {

// Mean pointwise Euclidean distance between a solution and a reference
// trajectory sampled at `ts`: (1/n) * sum_i ||sol(t_i) - ref(t_i)||_2.
// The reference is a callable to admit both analytic solutions and dense
// reference solves.
double avg_timeseries_error(const Solution& sol, const std::vector<double>& ts,
                            const std::function<Vec(double)>& ref);

struct ConvergenceResult {
  std::vector<double> dts;
  std::vector<double> errors;  // end-state L2 error per dt
  double order = 0.0;          // log-log least-squares slope
};

// Fixed-step convergence study on a problem with known exact solution.
// A run that does not finish throws NonFiniteError; an exactly-zero error
// yields order = +inf (the sentinel for "exact to roundoff").
ConvergenceResult convergence_order(const ODEProblem& prob,
                                    const std::string& alg,
                                    const std::vector<double>& dts,
                                    const std::function<Vec(double)>& exact,
                                    Registry& reg = default_registry());

// Second-order variant; `exact` returns the packed state [x, v].
ConvergenceResult convergence_order(const SecondOrderODEProblem& prob,
                                    const std::string& alg,
                                    const std::vector<double>& dts,
                                    const std::function<Vec(double)>& exact,
                                    Registry& reg = default_registry());

struct WorkPrecisionEntry {
  double abstol = 0.0, reltol = 0.0;
  double error = 0.0;      // avg timeseries error vs reference (NaN: failed run)
  double runtime_s = 0.0;  // median over repetitions, warm-up excluded
  Stats stats;
  Retcode retcode = Retcode::Success;
};

struct WorkPrecisionOptions {
  int reps = 5;              // timed repetitions (median taken); >= 1
  std::vector<double> sample_ts;  // comparison grid; default: 100 uniform
  SolverOptions base;        // tolerances overridden per grid point
  bool measure_error = true;  // false: caller supplies errors (stays NaN here)
};

// One work-precision curve: solve at each (abstol, reltol) pair, timing the
// solve alone (setup excluded) and measuring error on an untimed dense run
// against `ref`.  Failed runs stay in the table with error = NaN.
std::vector<WorkPrecisionEntry> work_precision(
    const ODEProblem& prob, const std::string& alg,
    const std::vector<std::pair<double, double>>& tols,
    const std::function<Vec(double)>& ref,
    const WorkPrecisionOptions& wp = {}, Registry& reg = default_registry());

// Tight-tolerance reference trajectory (abstol = reltol = 1e-14, raised step
// budget; dp5, or rosenbrock23 when the problem is hinted stiff).  Throws
// NonFiniteError if the reference solve fails.
std::function<Vec(double)> reference_solution(const ODEProblem& prob);

}  // namespace confed::devtools
