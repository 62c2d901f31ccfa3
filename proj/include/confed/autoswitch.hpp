#pragma once

#include "confed/registry.hpp"

namespace confed {

// One-sided stiffness estimate from two stages sharing the same c:
// rho ~ |k_b - k_a| / |u_b - u_a|, an approximation of the dominant
// eigenvalue magnitude along the step.
struct StiffnessEstimate {
  double rho = 0.0;
  bool valid = false;  // false when the stage states coincide
};

StiffnessEstimate estimate_stiffness(const Vec& k_a, const Vec& k_b,
                                     const Vec& g_a, const Vec& g_b);

// Composite stepper alternating between a non-stiff and a stiff member.
// Switch logic: with S = 3.25 and the current dt,
//   in the non-stiff regime, a step votes stiff when rho*dt > 0.9*S;
//   in the stiff regime, it votes non-stiff when rho*dt < 1.1*S;
// three consecutive votes flip the regime.  Transitions are recorded in the
// solution's regime trace.
StepperPtr make_autoswitch(const std::string& nonstiff_name,
                           const std::string& stiff_name, Registry& reg,
                           const ODEProblem&, const SolverOptions&, Stats&);

}  // namespace confed
