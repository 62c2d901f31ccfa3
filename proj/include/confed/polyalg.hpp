#pragma once

#include <string>

#include "confed/options.hpp"
#include "confed/problem.hpp"

namespace confed {

// Everything the default-algorithm decision table is allowed to look at.
struct SelectionContext {
  ProblemKind kind = ProblemKind::FirstOrderODE;
  StiffnessHint hint = StiffnessHint::None;
  std::size_t n = 0;
  bool adaptive = true;  // false when the caller fixed dt and wants no control
  bool has_events = false;
  double reltol = 1e-3;
};

struct AlgorithmChoice {
  std::string algorithm;       // registry name, possibly composite
  std::string rationale;       // one sentence for explain/diagnostics
  bool memory_diagnostic = false;  // large stiff system: dense Jacobian warning
};

SelectionContext make_context(const ODEProblem& prob, const SolverOptions& opts);
SelectionContext make_context(const SecondOrderODEProblem& prob,
                              const SolverOptions& opts);

// The decision table.  Total: every context maps to exactly one choice.
AlgorithmChoice default_algorithm(const SelectionContext& ctx);

// Multi-line trace of the table walk for `explain`.
std::string explain_choice(const SelectionContext& ctx);

}  // namespace confed
