#pragma once

#include <string>

#include "confed/registry.hpp"

namespace confed {

// Entry point.  Algorithm strings name registry entries; composites take
// their parts in parentheses: "autoswitch(tsit5,rosenbrock23)".  The bare
// name "autoswitch" uses the default pairing.  Passing "auto" (or using the
// overloads without an algorithm) delegates selection to the decision table.
Solution solve(const ODEProblem& prob, const std::string& alg,
               const SolverOptions& opts = {},
               Registry& reg = default_registry());

Solution solve(const SecondOrderODEProblem& prob, const std::string& alg,
               const SolverOptions& opts = {},
               Registry& reg = default_registry());

Solution solve(const ODEProblem& prob, const SolverOptions& opts = {},
               Registry& reg = default_registry());

Solution solve(const SecondOrderODEProblem& prob,
               const SolverOptions& opts = {},
               Registry& reg = default_registry());

// Two-evaluation startup heuristic for adaptive methods.  Returns a dt in
// (0, (tf-t0)/100], at least 1e-10*(tf-t0); the quiescent case (u' = 0)
// lands on the cap.  Charges 2 RHS evaluations to stats.
double initial_dt(const ODEProblem& prob, int order, double abstol,
                  double reltol, Stats& stats);

}  // namespace confed
