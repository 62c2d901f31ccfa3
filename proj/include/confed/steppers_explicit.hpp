#pragma once

#include "confed/registry.hpp"
#include "confed/tableau.hpp"

namespace confed {

// Stepper factories for the non-stiff methods.  `profile` tweaks only the
// controller (dp5_lowtol ships a conservative one); the formula is shared.
StepperPtr make_euler(const ODEProblem&, const SolverOptions&, Stats&);
StepperPtr make_rk4(const ODEProblem&, const SolverOptions&, Stats&);
StepperPtr make_tsit5(const ODEProblem&, const SolverOptions&, Stats&);
StepperPtr make_dp5(const ODEProblem&, const SolverOptions&, Stats&);
StepperPtr make_dp5_lowtol(const ODEProblem&, const SolverOptions&, Stats&);
StepperPtr make_erk(const ButcherTableau& tab, ControllerParams ctrl,
                    const ODEProblem&, const SolverOptions&, Stats&);

StepperPtr make_verlet(const SecondOrderODEProblem&, const SolverOptions&,
                       Stats&);

// Single-step primitives, exposed for direct testing.  Each charges its RHS
// evaluations to stats.
void euler_step(const RhsFn& f, const Vec& p, double t, double dt,
                const Vec& u, Vec& out, Stats& stats);

// One kick-drift-kick leapfrog step.  a_in holds a(x_n) on entry when warm
// (pass null on the first step); on exit a_out holds a(x_{n+1}).  Warm calls
// evaluate the acceleration exactly once.
void verlet_step(const AccelFn& f, const Vec& p, double t, double dt,
                 const Vec& x, const Vec& v, Vec& x_out, Vec& v_out,
                 const Vec* a_in, Vec& a_out, Stats& stats);

}  // namespace confed
