#pragma once

#include <optional>
#include <vector>

#include "confed/events.hpp"
#include "confed/types.hpp"

namespace confed {

struct SolverOptions {
  double abstol = 1e-6;
  double reltol = 1e-3;

  // Fixed or initial step size.  Required by non-adaptive methods; for
  // adaptive ones it overrides the automatic initial-step heuristic.
  std::optional<double> dt;

  // Step-size control.  Setting this false on a method with an embedded
  // error estimate freezes the step at dt (which then becomes required);
  // methods without an estimate ignore it, they are never adaptive.
  bool adaptive = true;

  long max_steps = 1000000;  // budget on step attempts (accepted + rejected)

  // Uniformly spaced (or arbitrary) output times.  When set, the solution
  // holds exactly these times, materialized from the continuous extension.
  std::optional<Vec> saveat;

  bool save_everystep = true;  // ignored when saveat is set
  bool dense = true;           // keep per-step interpolants for interpolate()

  std::vector<ContinuousCallback> callbacks;

  // Overrides the problem's own stiffness hint during algorithm selection
  // when set to anything but None.
  StiffnessHint stiffness_hint = StiffnessHint::None;

  // Throws InvalidOptions on nonsense (non-positive tolerances, dt == 0,
  // non-increasing saveat, max_steps < 1).
  void validate() const;
};

}  // namespace confed
