#include "confed/polyalg.hpp"

#include <sstream>

namespace confed {

SelectionContext make_context(const ODEProblem& prob,
                              const SolverOptions& opts) {
  SelectionContext ctx;
  ctx.kind = ProblemKind::FirstOrderODE;
  ctx.hint = opts.stiffness_hint != StiffnessHint::None ? opts.stiffness_hint
                                                        : prob.hint;
  ctx.n = prob.u0.size();
  ctx.adaptive = opts.adaptive;
  ctx.has_events = !opts.callbacks.empty();
  ctx.reltol = opts.reltol;
  return ctx;
}

SelectionContext make_context(const SecondOrderODEProblem& prob,
                              const SolverOptions& opts) {
  SelectionContext ctx;
  ctx.kind = ProblemKind::SecondOrderODE;
  ctx.hint = opts.stiffness_hint;
  ctx.n = 2 * prob.x0.size();
  ctx.adaptive = opts.adaptive;
  ctx.has_events = !opts.callbacks.empty();
  ctx.reltol = opts.reltol;
  return ctx;
}

// The table is intentionally small and first-match-wins, mirroring how it is
// unit-tested: one test per row.
AlgorithmChoice default_algorithm(const SelectionContext& ctx) {
  AlgorithmChoice c;

  if (ctx.kind == ProblemKind::SecondOrderODE && !ctx.adaptive) {
    c.algorithm = "verlet";
    c.rationale =
        "second-order problem with a fixed dt: symplectic velocity Verlet "
        "preserves the energy surface";
    return c;
  }
  // An adaptive second-order request integrates the first-order reduction;
  // selection continues on the reduced system below.

  if (ctx.hint == StiffnessHint::Nonstiff) {
    if (ctx.reltol >= 1e-8) {
      c.algorithm = "tsit5";
      c.rationale = "declared non-stiff at ordinary tolerances: tsit5";
    } else {
      c.algorithm = "dp5_lowtol";
      c.rationale =
          "declared non-stiff at tight tolerances (reltol < 1e-8): "
          "dp5_lowtol's conservative controller wastes fewer rejections";
    }
    return c;
  }

  if (ctx.hint == StiffnessHint::Stiff) {
    if (ctx.has_events) {
      c.algorithm = "rosenbrock23";
      c.rationale =
          "declared stiff with events: rosenbrock23 restarts cleanly at "
          "discontinuities (no multistep history to rebuild)";
      return c;
    }
    if (ctx.n > 10000) {
      c.algorithm = "bdf";
      c.memory_diagnostic = true;
      c.rationale =
          "declared stiff, very large system (n > 10^4): bdf; caution, the "
          "dense Jacobian and LU need O(n^2) memory";
      return c;
    }
    if (ctx.n > 50) {
      c.algorithm = "bdf";
      c.rationale =
          "declared stiff, larger system (n > 50): bdf amortizes Jacobian "
          "work across steps";
      return c;
    }
    c.algorithm = "rosenbrock23";
    c.rationale = "declared stiff, small system (n <= 50): rosenbrock23";
    return c;
  }

  // No hint: hedge with the stiffness-switching composite.
  if (ctx.has_events) {
    c.algorithm = "autoswitch(tsit5,rosenbrock23)";
    c.rationale =
        "no stiffness hint, events present: stiffness-switching composite "
        "with the restart-friendly stiff member";
    return c;
  }
  if (ctx.n > 50) {
    c.algorithm = "autoswitch(tsit5,bdf)";
    c.rationale =
        "no stiffness hint, larger system (n > 50): composite switching "
        "between tsit5 and bdf";
    return c;
  }
  c.algorithm = "autoswitch(tsit5,rosenbrock23)";
  c.rationale =
      "no stiffness hint, small system (n <= 50): composite switching "
      "between tsit5 and rosenbrock23";
  return c;
}

std::string explain_choice(const SelectionContext& ctx) {
  AlgorithmChoice c = default_algorithm(ctx);
  std::ostringstream os;
  os << "decision trace:\n";
  os << "  kind = " << to_string(ctx.kind) << " (n = " << ctx.n << ")\n";
  os << "  hint = " << to_string(ctx.hint)
     << ", events = " << (ctx.has_events ? "yes" : "no")
     << ", reltol = " << ctx.reltol
     << ", adaptive = " << (ctx.adaptive ? "yes" : "no") << "\n";
  os << "  rule: " << c.rationale << "\n";
  if (c.memory_diagnostic)
    os << "  diagnostic: dense Jacobian storage is O(n^2); consider a "
          "sparse/external solver at this size\n";
  os << "chosen: " << c.algorithm << "\n";
  return os.str();
}

}  // namespace confed
