#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confed/events.hpp"
#include "confed/problem.hpp"

namespace confed::problems {

// Canonical test problems.  Entries carry an analytic solution when one
// exists; otherwise accuracy studies fall back on a tight-tolerance
// reference solve.
struct CatalogEntry {
  std::string name;
  std::string summary;
  ProblemKind kind = ProblemKind::FirstOrderODE;
  std::function<ODEProblem()> make;            // null for second-order entries
  std::function<SecondOrderODEProblem()> make_second;
  std::function<Vec(double)> exact;            // null when no closed form
  bool has_default_callback = false;           // bouncing ball installs one
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& lookup(const std::string& name);  // DomainMismatch if absent

ODEProblem linear_decay();      // u' = -u, u(0)=1, t in [0,1]
ODEProblem linear_test(double lambda, double tf);  // u' = lambda*u
ODEProblem lorenz();            // classic chaotic benchmark
ODEProblem vanderpol(double mu);
ODEProblem robertson();
ODEProblem orego();
ODEProblem stiff_relaxation();  // u' = -1000(u - cos t)
SecondOrderODEProblem harmonic_oscillator();
SecondOrderODEProblem bouncing_ball();
ContinuousCallback bouncing_ball_callback();

}  // namespace confed::problems
